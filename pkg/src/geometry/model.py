"""Variety models: dimensions, random points, embeddings, tangent frames and Hessians."""

import logging
from dataclasses import dataclass
from functools import cached_property
from math import comb, prod
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from .parameterization import Parameterization, PolynomialMap, build_parameterization
from .varieties import VarietyKind, VarietySpec
from ..exactla.field import FieldCfg, Scalar
from ..exactla.matrix import MatrixF
from ..utils.errors import DimensionError, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VarietyModel:
    """Intrinsic dimension n, ambient dimension N and the cone parameterization."""
    spec: VarietySpec
    n: int
    N: int
    param_arity: int
    degree_bound: int

    @cached_property
    def parameterization(self) -> Parameterization:
        return build_parameterization(self.spec)

    @cached_property
    def polynomial_map(self) -> PolynomialMap:
        param = self.parameterization
        mapping = PolynomialMap(param.coordinates, param.symbols)
        if mapping.size != self.N + 1 or mapping.arity != self.param_arity:
            raise DimensionError(
                f"parameterization of {self.spec.label} has shape {mapping.size}x{mapping.arity}, "
                f"expected {self.N + 1}x{self.param_arity}"
            )
        return mapping

    def dim_abstract(self, h: int) -> int:
        """Dimension h(n+1) - 1 of the abstract secant variety."""
        return h * (self.n + 1) - 1

    def dim_expected(self, h: int) -> int:
        return min(self.dim_abstract(h), self.N)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'spec': self.spec.to_dict(),
            'n': self.n,
            'N': self.N,
            'param_arity': self.param_arity,
            'degree_bound': self.degree_bound,
            'provenance': {'kind': 'formula', 'name': 'model dimensions'},
        }


@dataclass(frozen=True)
class ParamPoint:
    """Chart coordinates followed by the cone scale, as field scalars."""
    coordinates: Tuple[Scalar, ...]
    field: FieldCfg

    def __post_init__(self):
        if not self.coordinates:
            raise PreconditionError("a parameter point needs at least the cone scale")
        if self.field.is_zero(self.coordinates[-1]):
            raise PreconditionError("cone scale must be nonzero")

    @property
    def chart(self) -> Tuple[Scalar, ...]:
        return self.coordinates[:-1]

    @property
    def scale(self) -> Scalar:
        return self.coordinates[-1]

    def __len__(self) -> int:
        return len(self.coordinates)


@dataclass(frozen=True)
class TangentFrame:
    """Rows span the tangent space of the affine cone at ``point``."""
    matrix: MatrixF
    point: ParamPoint


def make_model(spec: VarietySpec) -> VarietyModel:
    """Derive dimensions and degree bound for a variety spec.

    Raises:
        SpecError: If the spec violates its family constraints
    """
    spec.validate()
    if spec.is_product:
        n = sum(spec.dims)
        N = prod(comb(ni + di, ni) for di, ni in zip(spec.degrees, spec.dims)) - 1
        degree = sum(spec.degrees) + 1
    elif spec.kind is VarietyKind.GRASSMANN:
        n = (spec.k + 1) * (spec.n - spec.k)
        N = comb(spec.n + 1, spec.k + 1) - 1
        degree = spec.k + 2
    else:
        n = 2
        N = spec.d
        degree = spec.d + 1
    return VarietyModel(spec=spec, n=n, N=N, param_arity=n + 1, degree_bound=degree)


def _draw(rng: np.random.Generator, field: FieldCfg, nonzero: bool) -> int:
    if field.is_prime:
        return int(rng.integers(1 if nonzero else 0, field.modulus))
    bound = field.sample_bound
    while True:
        value = int(rng.integers(-bound, bound + 1))
        if value or not nonzero:
            return value


def sample_point(model: VarietyModel, rng: np.random.Generator, field: FieldCfg) -> ParamPoint:
    """Uniform random chart point with a nonzero cone scale; deterministic given the generator state."""
    chart = [_draw(rng, field, nonzero=False) for _ in range(model.n)]
    scale = _draw(rng, field, nonzero=True)
    return ParamPoint(tuple(chart) + (scale,), field)


def _check_arity(model: VarietyModel, p: ParamPoint) -> None:
    if len(p) != model.param_arity:
        raise DimensionError(f"point has {len(p)} coordinates, {model.spec.label} needs {model.param_arity}")


def embed(model: VarietyModel, p: ParamPoint) -> List[Scalar]:
    """The N+1 affine-cone coordinates of ``p``."""
    _check_arity(model, p)
    return model.polynomial_map.value(p.coordinates, p.field)


def tangent_frame(model: VarietyModel, p: ParamPoint) -> TangentFrame:
    """First partials of the cone parameterization; the last row is the embedded point divided by the scale."""
    _check_arity(model, p)
    rows = model.polynomial_map.jacobian_rows(p.coordinates, p.field)
    return TangentFrame(MatrixF.from_rows(rows, p.field, cols=model.N + 1), p)


def contracted_hessian(model: VarietyModel, p: ParamPoint, ell: Sequence[Scalar]) -> MatrixF:
    """Second partials of ``ell . embed`` at ``p``.

    Raises:
        DimensionError: If ``ell`` has the wrong length
        PreconditionError: If ``ell`` does not annihilate the tangent frame at ``p``
    """
    _check_arity(model, p)
    if len(ell) != model.N + 1:
        raise DimensionError(f"functional has {len(ell)} entries, ambient space has {model.N + 1}")
    field = p.field
    ell = [field.reduce(x) for x in ell]
    frame = tangent_frame(model, p).matrix
    if any(v != 0 for v in frame.apply(ell)):
        raise PreconditionError("functional is not tangent at the point")
    H = model.polynomial_map.contracted_hessian(p.coordinates, ell, field)
    return MatrixF.from_rows(H, field, cols=model.param_arity)
