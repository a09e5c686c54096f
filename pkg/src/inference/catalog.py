"""Literature facts shipped as a JSON knowledge base.

Each entry names a family, optional integer conditions on the variables of
:func:`catalog_variables`, a predicate, an h-range expression and a
citation. h-range forms::

    any            every h up to the ceiling (or no index, for Not1Twd)
    == E           exactly E
    <= E / < E     1 .. E or 1 .. E-1
    E1 .. E2       inclusive range

``E`` is an integer expression over the catalog variables. Ranges are
instantiated for h up to the ceiling, plus the top endpoint itself when it
lies above.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import jsonschema
import sympy
from sympy.parsing.sympy_parser import parse_expr

from .facts import Fact, Predicate, Provenance
from ..geometry.formulas import catalog_variables, diagonal_factor, xkn_shape
from ..geometry.varieties import VarietyKind, VarietySpec
from ..utils.config import PACKAGE_ROOT, SHIPPED_KNOWLEDGE_BASE
from ..utils.errors import KnowledgeBaseError

logger = logging.getLogger(__name__)

KNOWLEDGE_BASE_SCHEMA = PACKAGE_ROOT / 'config' / 'schemas' / 'knowledge_base.schema.json'

_COMPARISONS: Dict[str, Callable[[int, int], bool]] = {
    'eq': lambda a, b: a == b,
    'ne': lambda a, b: a != b,
    'lt': lambda a, b: a < b,
    'le': lambda a, b: a <= b,
    'gt': lambda a, b: a > b,
    'ge': lambda a, b: a >= b,
}

_BOUND = re.compile(r'^(==|<=|<)\s*(.+)$')
_SPAN = re.compile(r'^(.+?)\s*\.\.\s*(.+)$')


def _linear_space(spec: VarietySpec) -> bool:
    if spec.is_product:
        return len(spec.dims) == 1 and spec.degrees[0] == 1
    if spec.kind is VarietyKind.GRASSMANN:
        return spec.k == 0 or spec.k == spec.n - 1
    return False


def _all_binary(spec: VarietySpec) -> bool:
    return spec.is_product and len(spec.dims) >= 2 and all(n == 1 for n in spec.dims)


def _two_factor(spec: VarietySpec, first: int, second: Callable[[int], bool]) -> bool:
    return (spec.is_product and len(spec.dims) == 2 and spec.degrees[0] == first
            and second(spec.degrees[1]))


FAMILIES: Dict[str, Callable[[VarietySpec], bool]] = {
    'smooth_nonlinear': lambda s: s.kind is not VarietyKind.GAUSSIAN_MOMENTS and not _linear_space(s),
    'gaussian': lambda s: s.kind is VarietyKind.GAUSSIAN_MOMENTS,
    'binary_segre': lambda s: s.is_segre and _all_binary(s),
    'diagonal_segre': lambda s: (diagonal_factor(s) or (0, 0))[0] >= 2 and diagonal_factor(s)[1] >= 4,
    'three_factor': lambda s: (diagonal_factor(s) or (0, 0))[0] >= 2 and diagonal_factor(s)[1] == 3,
    'xkn': lambda s: xkn_shape(s) is not None and xkn_shape(s)[1] % 2 == 1,
    'veronese': lambda s: s.is_veronese,
    'sv_binary': lambda s: _all_binary(s) and not s.is_segre,
    'sv_general': lambda s: s.is_product and len(s.dims) >= 2 and not s.is_segre,
    'sv_1_2': lambda s: _two_factor(s, 1, lambda d: d == 2),
    'sv_1_d': lambda s: _two_factor(s, 1, lambda d: d >= 3),
    'grassmann': lambda s: s.kind is VarietyKind.GRASSMANN,
}


def evaluate_expression(expression: Union[str, int], variables: Dict[str, int]) -> int:
    """Integer value of an entry expression.

    Raises:
        KnowledgeBaseError: If the expression uses unknown names or is not an integer
    """
    if isinstance(expression, int):
        return expression
    local = {name: sympy.Integer(value) for name, value in variables.items()}
    try:
        value = parse_expr(str(expression), local_dict=local)
    except (SyntaxError, TypeError, ValueError) as e:
        raise KnowledgeBaseError(f"cannot parse expression '{expression}': {e}") from e
    if not getattr(value, 'is_Integer', False):
        raise KnowledgeBaseError(f"expression '{expression}' does not evaluate to an integer")
    return int(value)


@dataclass(frozen=True)
class HRange:
    low: Optional[int]
    high: Optional[int]

    def values(self, ceiling: int) -> List[int]:
        """Indices up to the ceiling, plus the top endpoint when it lies above."""
        low = max(self.low or 1, 1)
        high = ceiling if self.high is None else self.high
        hs = list(range(low, min(high, ceiling) + 1))
        if high > ceiling and high >= low:
            hs.append(high)
        return hs


def parse_h_range(text: str, variables: Dict[str, int]) -> HRange:
    text = text.strip()
    if text == 'any':
        return HRange(None, None)
    match = _BOUND.match(text)
    if match:
        op, value = match.group(1), evaluate_expression(match.group(2), variables)
        if op == '==':
            return HRange(value, value)
        return HRange(1, value if op == '<=' else value - 1)
    match = _SPAN.match(text)
    if match:
        return HRange(evaluate_expression(match.group(1), variables),
                      evaluate_expression(match.group(2), variables))
    raise KnowledgeBaseError(f"unrecognised h-range '{text}'")


@dataclass(frozen=True)
class KnowledgeEntry:
    """A literature statement for every variety matching ``family`` and ``where``."""
    entry_id: str
    family: str
    fact: Predicate
    h_range: str
    citation: str
    where: Dict[str, Dict[str, int]] = field(default_factory=dict, hash=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'KnowledgeEntry':
        return cls(
            entry_id=data['id'],
            family=data['family'],
            fact=Predicate(data['fact']),
            h_range=data.get('h_range', 'any'),
            citation=data['citation'],
            where=data.get('where', {}),
        )

    def matches(self, spec: VarietySpec, variables: Dict[str, int]) -> bool:
        if not FAMILIES[self.family](spec):
            return False
        for name, conditions in self.where.items():
            if name not in variables:
                raise KnowledgeBaseError(f"entry {self.entry_id}: unknown variable '{name}'")
            value = variables[name]
            for op, bound in conditions.items():
                if not _COMPARISONS[op](value, evaluate_expression(bound, variables)):
                    return False
        return True

    def instantiate(self, variables: Dict[str, int], ceiling: int) -> List[Fact]:
        provenance = Provenance('literature', self.citation)
        if not self.fact.indexed:
            return [Fact(self.fact, None, provenance)]
        h_range = parse_h_range(self.h_range, variables)
        return [Fact(self.fact, h, provenance) for h in h_range.values(ceiling)]


class KnowledgeBase:
    """Validated collection of knowledge entries."""

    def __init__(self, entries: List[KnowledgeEntry], source: str = ''):
        self.entries = entries
        self.source = source
        self.logger = logging.getLogger(__name__)

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None) -> 'KnowledgeBase':
        """
        Read and validate a knowledge-base file.

        Args:
            path: JSON file (the shipped knowledge base when omitted)

        Raises:
            KnowledgeBaseError: If the file is unreadable or fails schema validation
        """
        path = Path(path) if path else SHIPPED_KNOWLEDGE_BASE
        try:
            with open(path, 'r', encoding='utf-8') as f:
                document = json.load(f)
            with open(KNOWLEDGE_BASE_SCHEMA, 'r', encoding='utf-8') as f:
                schema = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise KnowledgeBaseError(f"cannot read knowledge base {path}: {e}") from e
        try:
            jsonschema.validate(document, schema)
        except jsonschema.ValidationError as e:
            raise KnowledgeBaseError(f"knowledge base {path} fails schema validation: {e.message}") from e
        entries = [KnowledgeEntry.from_dict(item) for item in document['entries']]
        ids = [e.entry_id for e in entries]
        if len(set(ids)) != len(ids):
            raise KnowledgeBaseError(f"knowledge base {path} has duplicate entry ids")
        logger.debug(f"Loaded {len(entries)} knowledge entries from {path}")
        return cls(entries, str(path))

    def matching(self, spec: VarietySpec) -> List[KnowledgeEntry]:
        variables = catalog_variables(spec)
        return [e for e in self.entries if e.matches(spec, variables)]

    def catalog_facts(self, spec: VarietySpec, ceiling: int) -> List[Fact]:
        """All facts of matching entries, each carrying its citation, in a stable order."""
        variables = catalog_variables(spec)
        facts: List[Fact] = []
        for entry in self.entries:
            if entry.matches(spec, variables):
                facts.extend(entry.instantiate(variables, ceiling))
        facts.sort(key=lambda f: (f.key, f.provenance.source))
        self.logger.info(f"Catalog gives {len(facts)} facts for {spec.label}")
        return facts
