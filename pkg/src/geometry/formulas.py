"""Closed-form rank statistics and the small number-theoretic helpers behind them.

All arithmetic is exact: Python integers and ``fractions.Fraction``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor
from typing import Any, Dict, Optional, Tuple

from .model import make_model
from .varieties import VarietyKind, VarietySpec


@dataclass(frozen=True)
class RankStats:
    """Expected generic rank and the floor statistic of a variety."""
    gr: int
    s: int
    delta: Optional[int]
    perfect: bool
    n: int
    N: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'gr': self.gr,
            's': self.s,
            'delta': self.delta,
            'perfect': self.perfect,
            'provenance': {'kind': 'formula', 'name': 'rank statistics'},
        }


def floor_log2(value: int) -> int:
    """Largest e with 2^e <= value, for value >= 1."""
    if value < 1:
        raise ValueError(f"floor_log2 needs a positive argument, got {value}")
    return value.bit_length() - 1


def diagonal_factor(spec: VarietySpec) -> Optional[Tuple[int, int]]:
    """(factor dimension, number of factors) when ``spec`` is a diagonal Segre X_n^k."""
    if spec.is_segre and len(set(spec.dims)) == 1:
        return spec.dims[0], len(spec.dims)
    return None


def rank_stats(spec: VarietySpec) -> RankStats:
    """gr = ceil((N+1)/(n+1)), s = floor((N+1)/(n+1)), delta = s mod (factor dim + 1) for diagonal Segre."""
    model = make_model(spec)
    total, block = model.N + 1, model.n + 1
    s = total // block
    gr = -(-total // block)
    delta = None
    diagonal = diagonal_factor(spec)
    if diagonal is not None:
        delta = s % (diagonal[0] + 1)
    return RankStats(gr=gr, s=s, delta=delta, perfect=total % block == 0, n=model.n, N=model.N)


def special_defective_h(degrees: Tuple[int, ...]) -> Optional[int]:
    """The h at which a binary Segre-Veronese degree vector is special, or None.

    Special vectors (up to order): (2, 2a; 2a+1), (1, 1, 2a; 2a+1),
    (2, 2, 2; 7) and (1, 1, 1, 1; 3), with a >= 1.
    """
    ordered = tuple(sorted(degrees))
    if len(ordered) == 2 and ordered[0] == 2 and ordered[1] % 2 == 0:
        return ordered[1] + 1
    if len(ordered) == 3 and ordered[:2] == (1, 1) and ordered[2] % 2 == 0:
        return ordered[2] + 1
    if ordered == (2, 2, 2):
        return 7
    if ordered == (1, 1, 1, 1):
        return 3
    return None


def r_mn(m: int, n: int) -> Fraction:
    """Threshold r(m, n) for the O(1, 2) embedding of P^m x P^n."""
    if m % 2 == 0 and n % 2 == 1:
        return Fraction(m ** 3 - 2 * m)
    return Fraction((m - 2) * (m + 1) ** 2, 2)


def sv1d_rank(m: int, n: int, d: int) -> int:
    """Largest multiple of (m+1) not exceeding floor((m+1) binom(n+d, d) / (m+n+1))."""
    ceiling = (m + 1) * comb(n + d, d) // (m + n + 1)
    return ceiling - ceiling % (m + 1)


def grassmann_power(k: int, n: int) -> Fraction:
    """((n+1)/(k+1))^floor(log2 k) as an exact rational; needs k >= 1."""
    return Fraction(n + 1, k + 1) ** floor_log2(k)


def amr_power(spec: VarietySpec) -> int:
    """n_1^floor(log2(d - 1)) with n_1 the smallest factor dimension and d the total degree."""
    d = sum(spec.degrees)
    return min(spec.dims) ** floor_log2(d - 1)


def co1_twd_bound(n: int, k: int) -> int:
    """2^((k-1)(alpha-1)) with alpha the largest integer such that n+1 >= 2^alpha."""
    alpha = floor_log2(n + 1)
    return 2 ** ((k - 1) * (alpha - 1))


AH_EXCEPTIONS = {(4, 2): 5, (4, 3): 9, (3, 4): 7, (4, 4): 14}


def ah_exception_h(d: int, n: int) -> Optional[int]:
    """Defective h for the sporadic Veronese exceptions with d >= 3."""
    return AH_EXCEPTIONS.get((d, n))


def xkn_shape(spec: VarietySpec) -> Optional[Tuple[int, int]]:
    """(k, n) when ``spec`` is P^k x (P^n)^(k+1) with the P^k factor listed first."""
    if not spec.is_segre or len(spec.dims) < 3:
        return None
    k, rest = spec.dims[0], spec.dims[1:]
    if len(set(rest)) == 1 and len(rest) == k + 1:
        return k, rest[0]
    return None


def catalog_variables(spec: VarietySpec) -> Dict[str, int]:
    """Integer variables that knowledge-base entries may reference.

    Booleans are stored as 0/1. Variables that do not apply to ``spec`` are
    set to 0.
    """
    model = make_model(spec)
    stats = rank_stats(spec)
    values: Dict[str, int] = {
        'n': model.n,
        'N': model.N,
        's': stats.s,
        'gr': stats.gr,
        'delta': stats.delta if stats.delta is not None else 0,
        'perfect': int(stats.perfect),
        'factors': len(spec.dims) if spec.is_product else 1,
        'factor_dim': 0,
        'd': 0,
        'xkn_k': 0,
        'xkn_n': 0,
        'co1_bound': 0,
        'cov1_range': 0,
        'special_h': 0,
        'amr_applies': 0,
        'amr_nondefective': 0,
        'ab_applies': 0,
        'sv1d_rank': 0,
        'mr_applies': 0,
        'mr_floor': 0,
        'ah_exception_h': 0,
        'k': spec.k,
    }
    diagonal = diagonal_factor(spec)
    if diagonal is not None:
        factor_dim, k = diagonal
        values['factor_dim'] = factor_dim
        values['co1_bound'] = co1_twd_bound(factor_dim, k)
        values['cov1_range'] = int((factor_dim + 1) ** k <= 15000)
    shape = xkn_shape(spec)
    if shape is not None:
        values['xkn_k'], values['xkn_n'] = shape
        values['cov1_range'] = int((shape[0] + 1) * (shape[1] + 1) ** (shape[0] + 1) <= 15000)
    if spec.is_product:
        values['d'] = sum(spec.degrees)
        if all(n == 1 for n in spec.dims):
            values['special_h'] = special_defective_h(spec.degrees) or 0
        if len(spec.dims) >= 2 and values['d'] >= 3:
            power = amr_power(spec)
            values['amr_applies'] = int(power >= 2 * model.n)
            values['amr_nondefective'] = power - model.n + 1
        if len(spec.dims) == 2 and spec.degrees[0] == 1:
            m, n = spec.dims
            if spec.degrees[1] == 2:
                values['ab_applies'] = int(n > r_mn(m, n))
            elif spec.degrees[1] >= 3:
                values['sv1d_rank'] = sv1d_rank(m, n, spec.degrees[1])
        if len(spec.dims) == 1:
            values['d'] = spec.degrees[0]
            values['ah_exception_h'] = ah_exception_h(spec.degrees[0], spec.dims[0]) or 0
    if spec.kind is VarietyKind.GRASSMANN and spec.k >= 1:
        values['mr_applies'] = int(2 * spec.k + 1 <= spec.n)
        values['mr_floor'] = floor(grassmann_power(spec.k, spec.n))
    if spec.kind is VarietyKind.GAUSSIAN_MOMENTS:
        values['d'] = spec.d
    return values
