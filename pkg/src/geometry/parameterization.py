"""Polynomial parameterizations of the affine cones over the supported varieties.

Every parameterization has ``n`` chart symbols followed by one cone-scale
symbol. Coordinate orders:

* Segre-Veronese: factor i contributes the degree-d_i monomials in
  (1, x_i1, ..., x_in_i) taken as sorted index multisets (graded
  lexicographic); the ambient coordinates are the products over
  ``itertools.product`` of the factor lists.
* Grassmann(k, n): maximal minors of [I_{k+1} | A] over lexicographically
  ordered column subsets.
* Gaussian moments: m_0, ..., m_d with m_j = mu m_{j-1} + (j - 1) var m_{j-2}.
"""

import logging
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
from typing import Dict, List, Sequence, Tuple

import sympy

from .varieties import VarietyKind, VarietySpec
from ..exactla.field import FieldCfg, Scalar

logger = logging.getLogger(__name__)

Terms = List[Tuple[Tuple[int, ...], int]]


@dataclass(frozen=True)
class Parameterization:
    """Symbolic coordinates of the affine cone."""
    chart_symbols: Tuple[sympy.Symbol, ...]
    scale_symbol: sympy.Symbol
    affine: Tuple[sympy.Expr, ...]

    @property
    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        return self.chart_symbols + (self.scale_symbol,)

    @property
    def coordinates(self) -> Tuple[sympy.Expr, ...]:
        return tuple(self.scale_symbol * e for e in self.affine)


def _segre_veronese(spec: VarietySpec) -> Tuple[Tuple[sympy.Symbol, ...], List[sympy.Expr]]:
    chart: List[sympy.Symbol] = []
    factor_monomials = []
    for i, (d, n) in enumerate(zip(spec.degrees, spec.dims)):
        xs = tuple(sympy.Symbol(f'x{i}_{j}') for j in range(1, n + 1))
        chart.extend(xs)
        homogeneous = (sympy.Integer(1),) + tuple(xs)
        factor_monomials.append([sympy.Mul(*(homogeneous[j] for j in idx))
                                 for idx in combinations_with_replacement(range(n + 1), d)])
    coords = [sympy.expand(sympy.Mul(*parts)) for parts in product(*factor_monomials)]
    return tuple(chart), coords


def _grassmann(spec: VarietySpec) -> Tuple[Tuple[sympy.Symbol, ...], List[sympy.Expr]]:
    rows, free = spec.k + 1, spec.n - spec.k
    chart = tuple(sympy.Symbol(f'a{i}_{j}') for i in range(rows) for j in range(free))
    block = sympy.Matrix(rows, free, list(chart))
    matrix = sympy.eye(rows).row_join(block)
    coords = [sympy.expand(matrix.extract(list(range(rows)), list(cols)).det())
              for cols in combinations(range(spec.n + 1), rows)]
    return tuple(chart), coords


def _gaussian(spec: VarietySpec) -> Tuple[Tuple[sympy.Symbol, ...], List[sympy.Expr]]:
    mu, var = sympy.symbols('mu var')
    moments = [sympy.Integer(1), mu]
    for j in range(2, spec.d + 1):
        moments.append(sympy.expand(mu * moments[j - 1] + (j - 1) * var * moments[j - 2]))
    return (mu, var), moments[:spec.d + 1]


def build_parameterization(spec: VarietySpec) -> Parameterization:
    """Symbolic cone parameterization for ``spec``."""
    if spec.is_product:
        chart, coords = _segre_veronese(spec)
    elif spec.kind is VarietyKind.GRASSMANN:
        chart, coords = _grassmann(spec)
    else:
        chart, coords = _gaussian(spec)
    logger.debug(f"Built parameterization for {spec.label}: {len(chart)} chart symbols, "
                 f"{len(coords)} coordinates")
    return Parameterization(tuple(chart), sympy.Symbol('lam'), tuple(coords))


def _terms(poly: sympy.Poly) -> Terms:
    return [(tuple(exps), int(coeff)) for exps, coeff in poly.terms() if coeff != 0]


class PolynomialMap:
    """Exact evaluation of a polynomial map and its first and second derivatives.

    Term tables come from ``sympy.Poly`` and its ``diff``; evaluation is plain
    integer arithmetic reduced in the caller's field.
    """

    def __init__(self, exprs: Sequence[sympy.Expr], symbols: Sequence[sympy.Symbol]):
        self.symbols = tuple(symbols)
        self.arity = len(self.symbols)
        self._polys = [sympy.Poly(e, *self.symbols) for e in exprs]
        self._values = [_terms(p) for p in self._polys]
        self._gradient: List[List[Terms]] = []
        self._hessian: Dict[Tuple[int, int], List[Terms]] = {}
        self.max_degree = max((max(exps, default=0) for t in self._values for exps, _ in t), default=0)

    @property
    def size(self) -> int:
        return len(self._polys)

    def _powers(self, point: Sequence[Scalar], field: FieldCfg) -> List[List[Scalar]]:
        table = []
        for x in point:
            row = [1]
            for _ in range(self.max_degree):
                row.append(field.reduce(row[-1] * x))
            table.append(row)
        return table

    @staticmethod
    def _evaluate(terms: Terms, powers: List[List[Scalar]], field: FieldCfg) -> Scalar:
        total = 0
        for exps, coeff in terms:
            value = coeff
            for var, e in enumerate(exps):
                if e:
                    value *= powers[var][e]
            total += value
        return field.reduce(total)

    def value(self, point: Sequence[Scalar], field: FieldCfg) -> List[Scalar]:
        powers = self._powers(point, field)
        return [self._evaluate(t, powers, field) for t in self._values]

    def jacobian_rows(self, point: Sequence[Scalar], field: FieldCfg) -> List[List[Scalar]]:
        """One row per variable: the partial derivative of every coordinate."""
        if not self._gradient:
            self._gradient = [[_terms(p.diff(s)) for p in self._polys] for s in self.symbols]
        powers = self._powers(point, field)
        return [[self._evaluate(t, powers, field) for t in column] for column in self._gradient]

    def _hessian_terms(self, i: int, j: int) -> List[Terms]:
        key = (min(i, j), max(i, j))
        if key not in self._hessian:
            si, sj = self.symbols[key[0]], self.symbols[key[1]]
            self._hessian[key] = [_terms(p.diff(si).diff(sj)) for p in self._polys]
        return self._hessian[key]

    def contracted_hessian(self, point: Sequence[Scalar], ell: Sequence[Scalar],
                           field: FieldCfg) -> List[List[Scalar]]:
        """Symmetric matrix of second partials of ``sum_c ell_c f_c`` at ``point``."""
        powers = self._powers(point, field)
        support = [c for c, weight in enumerate(ell) if weight != 0]
        H = [[0] * self.arity for _ in range(self.arity)]
        for i in range(self.arity):
            for j in range(i, self.arity):
                tables = self._hessian_terms(i, j)
                entry = field.reduce(sum(ell[c] * self._evaluate(tables[c], powers, field)
                                         for c in support))
                H[i][j] = entry
                H[j][i] = entry
        return H
