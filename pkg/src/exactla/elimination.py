"""Rank, kernels and subspace intersections by exact Gaussian elimination.

Prime mode row-reduces an object-dtype numpy array modulo p. Rational mode
uses fraction-free (Bareiss) elimination for ranks and Fraction arithmetic
for kernels, scaling each kernel vector back to primitive integers.
Pivots are always the first nonzero entry at or below the current row, so
results are reproducible for a fixed input.
"""

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Tuple

import numpy as np

from .matrix import MatrixF
from ..utils.errors import DimensionError


def _first_nonzero(A: np.ndarray, start: int, col: int) -> int:
    for i in range(start, A.shape[0]):
        if A[i, col] != 0:
            return i
    return -1


def _rref_mod(A: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """RREF over GF(p). Returns (reduced copy, pivot columns)."""
    A = A.copy()
    m, n = A.shape
    r = 0
    pivots: List[int] = []
    for c in range(n):
        if r == m:
            break
        piv = _first_nonzero(A, r, c)
        if piv < 0:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, :] = (A[r, :] * inv) % p
        others = [i for i in range(m) if i != r and A[i, c] != 0]
        if others:
            A[others, :] = (A[others, :] - np.outer(A[others, c], A[r, :])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _rref_rational(A: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """RREF over Q with Fraction entries."""
    A = np.vectorize(Fraction, otypes=[object])(A) if A.size else A.copy()
    m, n = A.shape
    r = 0
    pivots: List[int] = []
    for c in range(n):
        if r == m:
            break
        piv = _first_nonzero(A, r, c)
        if piv < 0:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r, :] = A[r, :] / A[r, c]
        others = [i for i in range(m) if i != r and A[i, c] != 0]
        if others:
            A[others, :] = A[others, :] - np.outer(A[others, c], A[r, :])
        pivots.append(c)
        r += 1
    return A, pivots


def _bareiss_rank(A: np.ndarray) -> int:
    """Fraction-free elimination; every intermediate entry is a minor of the input."""
    A = A.copy()
    m, n = A.shape
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        piv = _first_nonzero(A, r, c)
        if piv < 0:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        if r + 1 < m:
            below = A[r + 1:, :]
            below[:, c + 1:] = (A[r, c] * below[:, c + 1:]
                                - np.outer(below[:, c], A[r, c + 1:])) // prev
            below[:, c] = 0
            A[r + 1:, :] = below
        prev = A[r, c]
        r += 1
    return r


def _integral(m: MatrixF) -> np.ndarray:
    """Clear denominators row by row so Bareiss sees integers; row spaces are unchanged."""
    A = m.to_array()
    for i in range(m.rows):
        dens = [x.denominator for x in A[i, :] if isinstance(x, Fraction)]
        if dens:
            scale = reduce(lambda a, b: a * b // gcd(a, b), dens, 1)
            A[i, :] = [int(x * scale) for x in A[i, :]]
    return A


def rank(m: MatrixF) -> int:
    """Rank of ``m`` over its field; deterministic for a fixed input."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.field.is_prime:
        _, pivots = _rref_mod(m.to_array(), m.field.modulus)
        return len(pivots)
    return _bareiss_rank(_integral(m))


def _primitive(vector: List[Fraction]) -> List[int]:
    lcm = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in vector), 1)
    ints = [int(x * lcm) for x in vector]
    g = reduce(gcd, (abs(x) for x in ints), 0) or 1
    return [x // g for x in ints]


def kernel_basis(m: MatrixF) -> MatrixF:
    """Basis of the right null space, one vector per row.

    Row count is ``cols - rank(m)`` and ``m . kernel^T`` is exactly zero.
    Free columns are taken in increasing order; each basis vector has a 1
    (or, in rational mode, a positive primitive integer) at its free column.
    """
    field = m.field
    n = m.cols
    if m.rows == 0:
        return MatrixF.identity(n, field) if n else MatrixF.zeros(0, 0, field)
    A = m.to_array()
    if field.is_prime:
        R, pivots = _rref_mod(A, field.modulus)
    else:
        R, pivots = _rref_rational(A)
    pivot_set = set(pivots)
    basis = []
    for f in (j for j in range(n) if j not in pivot_set):
        x = [0] * n
        x[f] = 1
        for row, pc in enumerate(pivots):
            x[pc] = -R[row, f]
        if field.is_prime:
            basis.append([v % field.modulus for v in x])
        else:
            basis.append(_primitive([Fraction(v) for v in x]))
    return MatrixF.from_rows(basis, field, cols=n)


def intersection_dim(a: MatrixF, b: MatrixF) -> int:
    """Dimension of rowspace(a) ∩ rowspace(b).

    Raises:
        DimensionError: If the column counts differ
    """
    if a.cols != b.cols:
        raise DimensionError(f"column mismatch: {a.cols} vs {b.cols}")
    return rank(a) + rank(b) - rank(a.stack(b))
