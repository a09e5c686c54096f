import os
import yaml
import json
import logging
from pathlib import Path
from typing import Dict, Any, Optional
from dataclasses import dataclass, asdict

from sympy import isprime


MERSENNE_61 = 2**61 - 1
PACKAGE_ROOT = Path(__file__).resolve().parents[2]
SHIPPED_KNOWLEDGE_BASE = PACKAGE_ROOT / 'config' / 'knowledge_base.json'


@dataclass
class FieldConfig:
    """Configuration for the scalar field used by every probe."""
    mode: str = 'prime'
    modulus: int = MERSENNE_61
    sample_bound: int = 1000


@dataclass
class ProbeConfig:
    """Configuration for randomized secant and twd probes."""
    trials: int = 3
    seed: int = 0
    max_matrix_entries: int = 2**26
    confirm_defects_rational: bool = True
    rational_confirm_max_entries: int = 20000


@dataclass
class InferenceConfig:
    """Configuration for the rule engine and the literature catalog."""
    knowledge_base: str = ''
    dense_h_limit: int = 256
    promote_observed_defects: bool = False

    def knowledge_base_path(self) -> Path:
        return Path(self.knowledge_base) if self.knowledge_base else SHIPPED_KNOWLEDGE_BASE


@dataclass
class OutputConfig:
    """Configuration for report output."""
    output_directory: str = 'output'
    write_tsv: bool = True


@dataclass
class BudgetConfig:
    """Wall-clock and size budgets for range certification and tables."""
    max_seconds: float = 600.0
    table_desk_cap: int = 128


@dataclass
class AppConfig:
    """Main application configuration."""
    field: FieldConfig
    probes: ProbeConfig
    inference: InferenceConfig
    output: OutputConfig
    budget: BudgetConfig
    log_level: str = 'INFO'

    def __post_init__(self):
        if isinstance(self.field, dict):
            self.field = FieldConfig(**self.field)
        if isinstance(self.probes, dict):
            self.probes = ProbeConfig(**self.probes)
        if isinstance(self.inference, dict):
            self.inference = InferenceConfig(**self.inference)
        if isinstance(self.output, dict):
            self.output = OutputConfig(**self.output)
        if isinstance(self.budget, dict):
            self.budget = BudgetConfig(**self.budget)


def default_config() -> AppConfig:
    """Configuration built purely from dataclass defaults, no files or environment."""
    return AppConfig(
        field=FieldConfig(),
        probes=ProbeConfig(),
        inference=InferenceConfig(),
        output=OutputConfig(),
        budget=BudgetConfig(),
    )


class ConfigManager:
    """Manages application configuration from files and environment variables."""

    def __init__(self, config_file: Optional[str] = None):
        """
        Initialize configuration manager.

        Args:
            config_file: Path to configuration file (YAML or JSON)
        """
        self.config_file = config_file
        self.logger = logging.getLogger(__name__)
        self._config: Optional[AppConfig] = None

    def load_config(self, reload: bool = False) -> AppConfig:
        """
        Load configuration from file and environment variables.

        Args:
            reload: Ignore the cached configuration and read everything again

        Returns:
            AppConfig: Loaded and validated configuration

        Raises:
            ValueError: If a configuration value is out of range
        """
        if self._config is not None and not reload:
            return self._config

        config_dict = self._get_default_config()

        config_file = self.config_file or self._find_config_file()
        if config_file:
            file_config = self._load_from_file(config_file)
            if file_config:
                config_dict = self._merge_configs(config_dict, file_config)
                self.config_file = str(config_file)

        env_config = self._load_from_env()
        config_dict = self._merge_configs(config_dict, env_config)

        config = AppConfig(**config_dict)
        self.validate_config(config)
        self._config = config
        return self._config

    def _get_default_config(self) -> Dict[str, Any]:
        """Get default configuration dictionary."""
        return asdict(default_config())

    def _find_config_file(self) -> Optional[Path]:
        """Find configuration file in standard locations."""
        possible_paths = [
            Path('config/config.yaml'),
            Path('config/config.yml'),
            Path('config/config.json'),
            Path('config.yaml'),
            Path('config.yml'),
            Path.home() / '.config' / 'secantcert' / 'config.yaml'
        ]

        for path in possible_paths:
            if path.exists():
                return path

        return None

    def _load_from_file(self, file_path) -> Optional[Dict[str, Any]]:
        """Load configuration from file."""
        path = Path(file_path)
        if not path.exists():
            self.logger.warning(f"Configuration file not found: {file_path}")
            return None

        try:
            with open(path, 'r') as f:
                if path.suffix.lower() in ['.yaml', '.yml']:
                    return yaml.safe_load(f) or {}
                return json.load(f)
        except (OSError, yaml.YAMLError, json.JSONDecodeError) as e:
            raise ValueError(f"Failed to load configuration file {file_path}: {e}") from e

    def _load_from_env(self) -> Dict[str, Any]:
        """Load configuration from environment variables."""
        env_config: Dict[str, Any] = {}

        # Field configuration
        if os.getenv('SECANTCERT_FIELD_MODE'):
            env_config.setdefault('field', {})['mode'] = os.getenv('SECANTCERT_FIELD_MODE')

        if os.getenv('SECANTCERT_MODULUS'):
            env_config.setdefault('field', {})['modulus'] = int(os.getenv('SECANTCERT_MODULUS'))

        # Probe configuration
        if os.getenv('SECANTCERT_SEED'):
            env_config.setdefault('probes', {})['seed'] = int(os.getenv('SECANTCERT_SEED'))

        if os.getenv('SECANTCERT_TRIALS'):
            env_config.setdefault('probes', {})['trials'] = int(os.getenv('SECANTCERT_TRIALS'))

        # Inference configuration
        if os.getenv('SECANTCERT_KNOWLEDGE_BASE'):
            env_config.setdefault('inference', {})['knowledge_base'] = os.getenv('SECANTCERT_KNOWLEDGE_BASE')

        # Logging
        if os.getenv('LOG_LEVEL'):
            env_config['log_level'] = os.getenv('LOG_LEVEL')

        return env_config

    def _merge_configs(self, base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Recursively merge configuration dictionaries."""
        result = base.copy()

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._merge_configs(result[key], value)
            else:
                result[key] = value

        return result

    @staticmethod
    def validate_config(config: AppConfig) -> None:
        """Validate configuration values.

        Raises:
            ValueError: Naming the first offending setting
        """
        if config.field.mode not in ('prime', 'rational'):
            raise ValueError("Field mode must be 'prime' or 'rational'")

        if config.field.mode == 'prime':
            if not 2**31 < config.field.modulus < 2**63 or not isprime(config.field.modulus):
                raise ValueError("Field modulus must be a prime between 2^31 and 2^63")

        if config.field.sample_bound <= 0:
            raise ValueError("Rational sample bound must be positive")

        if config.probes.trials < 1:
            raise ValueError("Trials must be at least 1")

        if config.probes.max_matrix_entries <= 0:
            raise ValueError("Matrix entry cap must be positive")

        if config.probes.rational_confirm_max_entries < 0:
            raise ValueError("Rational confirmation cap must not be negative")

        if config.inference.dense_h_limit <= 0:
            raise ValueError("Dense h limit must be positive")

        if config.budget.max_seconds <= 0:
            raise ValueError("Time budget must be positive")

        if config.budget.table_desk_cap <= 0:
            raise ValueError("Table desk-scale cap must be positive")
