"""Exact linear algebra over a large prime field or the rationals."""

from .field import FieldCfg, FieldMode, schwartz_zippel_bound
from .matrix import MatrixF, stack_all
from .elimination import rank, kernel_basis, intersection_dim

__all__ = [
    'FieldCfg',
    'FieldMode',
    'MatrixF',
    'intersection_dim',
    'kernel_basis',
    'rank',
    'schwartz_zippel_bound',
    'stack_all',
]
