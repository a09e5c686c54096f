"""Published identifiability bounds for the supported families.

``published_bound`` evaluates every theorem whose family matches a spec,
records each hypothesis with the numbers behind it, and returns the largest
claimed bound among the theorems whose hypotheses all hold.
"""

from dataclasses import dataclass, field
from math import floor
from typing import Any, Dict, List, Optional

from .formulas import (
    diagonal_factor, floor_log2, grassmann_power, rank_stats, r_mn, special_defective_h,
    sv1d_rank, xkn_shape,
)
from .model import make_model
from .varieties import VarietyKind, VarietySpec

BINARY_SEGRE_TABLE = {2: 1, 3: 2, 4: 2, 5: 4, 6: 9}


@dataclass(frozen=True)
class Hypothesis:
    name: str
    holds: bool
    detail: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'holds': self.holds, 'detail': self.detail}


@dataclass
class TheoremCheck:
    """One theorem evaluated against a spec."""
    theorem: str
    hypotheses: List[Hypothesis] = field(default_factory=list)
    claimed: Optional[int] = None
    alternatives: Dict[str, int] = field(default_factory=dict)

    def require(self, name: str, holds: bool, detail: str = '') -> None:
        self.hypotheses.append(Hypothesis(name, bool(holds), detail))

    @property
    def applies(self) -> bool:
        return all(h.holds for h in self.hypotheses)

    @property
    def h_max(self) -> Optional[int]:
        return self.claimed if self.applies else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'theorem': self.theorem,
            'hypotheses': [h.to_dict() for h in self.hypotheses],
            'applies': self.applies,
            'h_max': self.h_max,
            'alternatives': dict(self.alternatives),
            'provenance': {'kind': 'formula', 'name': self.theorem},
        }


@dataclass
class BoundRecord:
    """Result of :func:`published_bound`."""
    h_max: Optional[int]
    checks: List[TheoremCheck]

    @property
    def hypotheses(self) -> List[Hypothesis]:
        return [h for check in self.checks for h in check.hypotheses]

    @property
    def theorem(self) -> Optional[str]:
        winners = [c for c in self.checks if c.h_max is not None and c.h_max == self.h_max]
        return winners[0].theorem if winners else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'h_max': self.h_max,
            'theorem': self.theorem,
            'checks': [c.to_dict() for c in self.checks],
            'provenance': {'kind': 'formula', 'name': 'published identifiability bounds'},
        }


def _binary_segre(spec: VarietySpec, s: int) -> TheoremCheck:
    k = len(spec.dims)
    check = TheoremCheck('binary Segre (P^1)^k')
    if k in BINARY_SEGRE_TABLE:
        check.require('k listed in the small-k table', True, f'k={k}')
        check.claimed = BINARY_SEGRE_TABLE[k]
    else:
        check.require('k >= 7', k >= 7, f'k={k}')
        check.claimed = s - 1
    return check


def _three_factor(spec: VarietySpec, s: int) -> TheoremCheck:
    check = TheoremCheck('three-factor diagonal Segre X_n^3')
    check.require('three equal factors', True, f'n={spec.dims[0]}')
    check.claimed = s - 1
    return check


def _diagonal(n: int, k: int, s: int, delta: int) -> TheoremCheck:
    check = TheoremCheck('diagonal Segre X_n^k')
    check.require('n >= 2', n >= 2, f'n={n}')
    check.require('k >= 4', k >= 4, f'k={k}')
    check.require('n >= delta', n >= delta, f'delta={delta}')
    check.claimed = s - delta - 1
    return check


def _xkn(k: int, n: int, gr: int) -> TheoremCheck:
    check = TheoremCheck('X[k,n] = P^k x (P^n)^(k+1)')
    check.require('n odd', n % 2 == 1, f'n={n}')
    check.require('k > 1', k > 1, f'k={k}')
    check.claimed = gr - 1
    return check


def _binary_sv(spec: VarietySpec, s: int) -> TheoremCheck:
    r = len(spec.dims)
    special = special_defective_h(spec.degrees)
    check = TheoremCheck('binary Segre-Veronese')
    check.require('not special', special is None,
                  f'special at h={special}' if special is not None else 'not in the special list')
    check.require('r >= 6', r >= 6, f'r={r}')
    check.claimed = s - 1
    return check


def _general_sv(spec: VarietySpec, n: int) -> TheoremCheck:
    check = TheoremCheck('general Segre-Veronese')
    d = sum(spec.degrees)
    check.require('r >= 2', len(spec.dims) >= 2, f'r={len(spec.dims)}')
    check.require('d >= 3', d >= 3, f'd={d}')
    if d >= 3:
        power = min(spec.dims) ** floor_log2(d - 1)
        check.require('n_1^floor(log2(d-1)) >= 2 dim X', power >= 2 * n,
                      f'{power} vs {2 * n}')
        check.claimed = power - 1
    return check


def _sv12(m: int, n: int, s: int) -> TheoremCheck:
    threshold = r_mn(m, n)
    check = TheoremCheck('Segre-Veronese O(1,2) on P^m x P^n')
    check.require('n > r(m,n)', n > threshold, f'r({m},{n})={threshold}')
    check.require('s >= 2(m+n)', s >= 2 * (m + n), f'{s} vs {2 * (m + n)}')
    check.claimed = s - 1
    return check


def _sv1d(m: int, n: int, d: int) -> TheoremCheck:
    rank = sv1d_rank(m, n, d)
    check = TheoremCheck('Segre-Veronese O(1,d) on P^m x P^n, d >= 3')
    check.require('s* > 2(m+n)', rank > 2 * (m + n), f's*={rank} vs {2 * (m + n)}')
    check.claimed = rank - 1
    return check


def _grassmann(k: int, n: int) -> TheoremCheck:
    check = TheoremCheck('Grassmann G(k,n)')
    check.require('k >= 1', k >= 1, f'k={k}')
    check.require('2k+1 <= n', 2 * k + 1 <= n, f'{2 * k + 1} vs {n}')
    if k >= 1:
        power = grassmann_power(k, n)
        dim = 2 * (n - k) * (k + 1)
        check.require('floor(V) >= 2 dim G(k,n)', floor(power) >= dim,
                      f'floor({power})={floor(power)} vs {dim}')
        floor_minus_one = floor(power) - 1
        minus_one_floor = floor(power - 1)
        check.alternatives = {
            'floor(V) - 1': floor_minus_one,
            'floor(V - 1)': minus_one_floor,
        }
        check.claimed = min(floor_minus_one, minus_one_floor)
    return check


def _gaussian(d: int, s: int) -> TheoremCheck:
    check = TheoremCheck('Gaussian moment surface G_{1,d}')
    check.require('d >= 14', d >= 14, f'd={d}')
    check.claimed = s - 1
    return check


def published_bound(spec: VarietySpec) -> BoundRecord:
    """Evaluate every matching published bound for ``spec``.

    Returns:
        BoundRecord: ``h_max`` is None unless some matching theorem has all
        hypotheses true; every evaluated hypothesis is recorded.
    """
    stats = rank_stats(spec)
    model = make_model(spec)
    checks: List[TheoremCheck] = []

    if spec.is_segre:
        diagonal = diagonal_factor(spec)
        if all(n == 1 for n in spec.dims):
            checks.append(_binary_segre(spec, stats.s))
        if diagonal is not None and diagonal[1] == 3:
            checks.append(_three_factor(spec, stats.s))
        if diagonal is not None and diagonal[0] >= 2 and diagonal[1] >= 4:
            checks.append(_diagonal(diagonal[0], diagonal[1], stats.s, stats.delta))
        shape = xkn_shape(spec)
        if shape is not None:
            checks.append(_xkn(shape[0], shape[1], stats.gr))
    elif spec.is_product:
        if all(n == 1 for n in spec.dims):
            checks.append(_binary_sv(spec, stats.s))
        if len(spec.dims) >= 2:
            checks.append(_general_sv(spec, model.n))
        if len(spec.dims) == 2 and spec.degrees[0] == 1:
            m, n = spec.dims
            if spec.degrees[1] == 2:
                checks.append(_sv12(m, n, stats.s))
            elif spec.degrees[1] >= 3:
                checks.append(_sv1d(m, n, spec.degrees[1]))
    elif spec.kind is VarietyKind.GRASSMANN:
        checks.append(_grassmann(spec.k, spec.n))
    elif spec.kind is VarietyKind.GAUSSIAN_MOMENTS:
        checks.append(_gaussian(spec.d, stats.s))

    claims = [c.h_max for c in checks if c.h_max is not None]
    return BoundRecord(h_max=max(claims) if claims else None, checks=checks)
