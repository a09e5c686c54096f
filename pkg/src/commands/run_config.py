"""Per-invocation settings: the command, its variety, and CLI overrides of the loaded config."""

import copy
from dataclasses import dataclass
from typing import Any, Dict, Optional

from ..geometry.varieties import VarietySpec, parse_spec
from ..utils.config import AppConfig, ConfigManager
from ..utils.errors import PreconditionError

COMMANDS = ('analyze', 'certify', 'table', 'selftest')


@dataclass
class RunConfig:
    """Everything one command needs besides the application config."""
    command: str
    spec: Optional[str] = None
    h: Optional[int] = None
    h_max: Optional[int] = None
    mode: str = 'hybrid'
    table: Optional[str] = None
    max_k: Optional[int] = None
    max_value: Optional[int] = None
    d_range: Optional[str] = None
    trials: int = 3
    seed: int = 0
    field_mode: str = 'prime'
    modulus: int = 2**61 - 1
    max_entries: int = 2**26
    output: Optional[str] = None
    knowledge_base: Optional[str] = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """
        Check the invariants every command relies on.

        Raises:
            PreconditionError: For an unknown command or a non-positive count
            SpecError: If the spec string does not parse
        """
        if self.command not in COMMANDS:
            raise PreconditionError(f"unknown command '{self.command}'")
        if self.trials < 1:
            raise PreconditionError("trials must be at least 1")
        if self.max_entries <= 0:
            raise PreconditionError("the matrix entry cap must be positive")
        for name in ('h', 'h_max', 'max_k', 'max_value'):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise PreconditionError(f"--{name.replace('_', '-')} must be at least 1")
        if self.spec is not None:
            parse_spec(self.spec)

    @property
    def variety(self) -> VarietySpec:
        if self.spec is None:
            raise PreconditionError(f"{self.command} needs --spec")
        return parse_spec(self.spec)

    @classmethod
    def from_args(cls, args: Any, config: AppConfig) -> 'RunConfig':
        """CLI flags where given, the loaded configuration otherwise."""
        def pick(name: str, fallback: Any) -> Any:
            value = getattr(args, name, None)
            return fallback if value is None else value

        return cls(
            command=args.command,
            spec=pick('spec', None),
            h=pick('h', None),
            h_max=pick('h_max', None),
            mode=pick('mode', 'hybrid'),
            table=pick('table', None),
            max_k=pick('max_k', None),
            max_value=pick('max', None),
            d_range=pick('d', None),
            trials=pick('trials', config.probes.trials),
            seed=pick('seed', config.probes.seed),
            field_mode=pick('field_mode', config.field.mode),
            modulus=pick('modulus', config.field.modulus),
            max_entries=pick('max_entries', config.probes.max_matrix_entries),
            output=pick('output', None),
            knowledge_base=pick('knowledge_base', config.inference.knowledge_base or None),
        )

    def apply_to(self, config: AppConfig) -> AppConfig:
        """A copy of ``config`` with this run's overrides, validated again.

        Raises:
            ValueError: If an override is out of range
        """
        merged = copy.deepcopy(config)
        merged.probes.trials = self.trials
        merged.probes.seed = self.seed
        merged.probes.max_matrix_entries = self.max_entries
        merged.field.mode = self.field_mode
        merged.field.modulus = self.modulus
        if self.knowledge_base:
            merged.inference.knowledge_base = self.knowledge_base
        ConfigManager.validate_config(merged)
        return merged

    def to_dict(self) -> Dict[str, Any]:
        """The settings that determine a command's output; the output path is left out."""
        data: Dict[str, Any] = {
            'command': self.command,
            'spec': self.spec,
            'trials': self.trials,
            'seed': self.seed,
            'field': {'mode': self.field_mode},
            'max_entries': self.max_entries,
        }
        if self.field_mode == 'prime':
            data['field']['modulus'] = str(self.modulus)
        for name in ('h', 'h_max', 'table', 'max_k', 'max_value', 'd_range', 'knowledge_base'):
            value = getattr(self, name)
            if value is not None:
                data[name] = value
        if self.command == 'certify' or self.command == 'table':
            data['mode'] = self.mode
        return data
