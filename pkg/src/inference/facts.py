"""Facts about one variety, their provenance, and the fact base that holds them."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Tuple

from ..utils.errors import ContradictionError, PreconditionError


class Predicate(Enum):
    """Statements the engine can hold about a variety, most indexed by h."""
    NOT_DEFECTIVE = 'NotDefective'
    DEFECTIVE = 'Defective'
    OBSERVED_DEFECTIVE = 'ObservedDefective'
    GENERICALLY_FINITE = 'GenericallyFinite'
    FIBER_TYPE = 'FiberType'
    SEC_PROPER = 'SecProper'
    DOMINANT = 'Dominant'
    NOT_TWD = 'NotTwd'
    TWD = 'Twd'
    NOT_1TWD = 'Not1Twd'
    IDENTIFIABLE = 'Identifiable'
    NOT_IDENTIFIABLE = 'NotIdentifiable'

    @property
    def indexed(self) -> bool:
        return self is not Predicate.NOT_1TWD


PROVENANCE_KINDS = ('probe', 'formula', 'literature', 'rule')

# Pairs of predicates that may not hold at the same h.
CONFLICTS = {
    Predicate.NOT_TWD: Predicate.TWD,
    Predicate.NOT_DEFECTIVE: Predicate.DEFECTIVE,
    Predicate.GENERICALLY_FINITE: Predicate.FIBER_TYPE,
    Predicate.SEC_PROPER: Predicate.DOMINANT,
    Predicate.IDENTIFIABLE: Predicate.NOT_IDENTIFIABLE,
    Predicate.FIBER_TYPE: Predicate.IDENTIFIABLE,
}


@dataclass(frozen=True)
class Provenance:
    """Where a fact came from.

    ``source`` is the probe report id, formula name, citation or rule id.
    Rule provenance lists the premise facts, whose own provenance makes the
    derivation tree.
    """
    kind: str
    source: str
    premises: Tuple['Fact', ...] = ()
    side_conditions: Tuple[str, ...] = ()
    failure_bound: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in PROVENANCE_KINDS:
            raise PreconditionError(f"unknown provenance kind {self.kind!r}")

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'kind': self.kind, 'source': self.source}
        if self.premises:
            data['premises'] = [p.label for p in self.premises]
        if self.side_conditions:
            data['side_conditions'] = list(self.side_conditions)
        if self.kind == 'probe':
            data['failure_bound'] = self.failure_bound
        return data


@dataclass(frozen=True)
class Fact:
    """A predicate at an index h; equality ignores provenance."""
    predicate: Predicate
    h: Optional[int] = None
    provenance: Optional[Provenance] = field(default=None, compare=False)

    def __post_init__(self):
        if self.predicate.indexed:
            if self.h is None or self.h < 1:
                raise PreconditionError(f"{self.predicate.value} needs h >= 1, got {self.h}")
        elif self.h is not None:
            raise PreconditionError(f"{self.predicate.value} takes no index")

    @property
    def key(self) -> Tuple[str, int]:
        return self.predicate.value, self.h or 0

    @property
    def label(self) -> str:
        if self.h is None:
            return self.predicate.value
        return f'{self.predicate.value}({self.h})'

    def with_provenance(self, provenance: Provenance) -> 'Fact':
        return Fact(self.predicate, self.h, provenance)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'fact': self.label,
            'predicate': self.predicate.value,
            'h': self.h,
            'provenance': self.provenance.to_dict() if self.provenance else None,
        }


def fact(predicate: Predicate, h: Optional[int] = None, kind: str = 'formula', source: str = '',
         failure_bound: Fraction = Fraction(0)) -> Fact:
    """Shorthand for a leaf fact with its provenance."""
    return Fact(predicate, h, Provenance(kind, source, failure_bound=failure_bound))


def _conflicts_of(f: Fact) -> List[Fact]:
    opposites = []
    for a, b in CONFLICTS.items():
        if f.predicate is a:
            opposites.append(Fact(b, f.h))
        elif f.predicate is b:
            opposites.append(Fact(a, f.h))
    if f.predicate is Predicate.NOT_1TWD:
        opposites.append(Fact(Predicate.TWD, 1))
    elif f.predicate is Predicate.TWD and f.h == 1:
        opposites.append(Fact(Predicate.NOT_1TWD))
    return opposites


class FactBase:
    """Single-writer store of facts keyed by (predicate, h)."""

    def __init__(self, facts: Optional[List[Fact]] = None):
        self._facts: Dict[Fact, Fact] = {}
        self.logger = logging.getLogger(__name__)
        for f in facts or []:
            self.assert_fact(f)

    def __contains__(self, f: Fact) -> bool:
        return f in self._facts

    def __len__(self) -> int:
        return len(self._facts)

    def __iter__(self) -> Iterator[Fact]:
        return iter(self.sorted())

    def get(self, f: Fact) -> Optional[Fact]:
        """The stored fact equal to ``f``, carrying its recorded provenance."""
        return self._facts.get(f)

    def has(self, predicate: Predicate, h: Optional[int] = None) -> bool:
        return Fact(predicate, h) in self._facts

    def lookup(self, predicate: Predicate, h: Optional[int] = None) -> Optional[Fact]:
        return self._facts.get(Fact(predicate, h))

    def assert_fact(self, f: Fact) -> 'FactBase':
        """
        Add a fact. Closure is not recomputed here.

        A fact already present keeps its first provenance.

        Raises:
            ContradictionError: If the base holds a conflicting fact
        """
        if f.provenance is None:
            raise PreconditionError(f"{f.label} has no provenance")
        if f in self._facts:
            return self
        for opposite in _conflicts_of(f):
            existing = self._facts.get(opposite)
            if existing is not None:
                raise ContradictionError(
                    f"{f.label} contradicts {existing.label}",
                    existing=existing, incoming=f,
                )
        self._facts[f] = f
        return self

    def sorted(self) -> List[Fact]:
        return sorted(self._facts.values(), key=lambda f: f.key)

    def with_predicate(self, predicate: Predicate) -> List[Fact]:
        return sorted((f for f in self._facts.values() if f.predicate is predicate), key=lambda f: f.key)

    def indices(self, predicate: Predicate) -> List[int]:
        return [f.h for f in self.with_predicate(predicate)]

    def max_index(self, predicate: Predicate) -> Optional[int]:
        hs = self.indices(predicate)
        return max(hs) if hs else None

    def copy(self) -> 'FactBase':
        clone = FactBase()
        clone._facts = dict(self._facts)
        return clone

    def to_dict(self) -> List[Dict[str, Any]]:
        return [f.to_dict() for f in self.sorted()]
