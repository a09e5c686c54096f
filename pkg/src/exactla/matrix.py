"""Immutable dense matrices over a FieldCfg."""

from dataclasses import dataclass
from itertools import chain
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .field import FieldCfg, Scalar
from ..utils.errors import DimensionError


@dataclass(frozen=True)
class MatrixF:
    """Dense row-major matrix whose entries are canonical field scalars.

    Build instances through :meth:`from_rows` or :meth:`from_array` so that
    entries are reduced; the raw constructor trusts its input.
    """
    rows: int
    cols: int
    entries: Tuple[Scalar, ...]
    field: FieldCfg

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError(f"negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], field: FieldCfg,
                  cols: Optional[int] = None) -> 'MatrixF':
        """Build a matrix from nested sequences.

        Args:
            rows: Row vectors, all of the same length
            field: Field the entries are reduced into
            cols: Column count, required only when ``rows`` is empty

        Returns:
            MatrixF: The reduced matrix
        """
        rows = list(rows)
        if not rows:
            return cls(0, cols or 0, (), field)
        width = len(rows[0])
        if cols is not None and cols != width:
            raise DimensionError(f"rows have {width} entries, expected {cols}")
        entries: List[Scalar] = []
        for row in rows:
            if len(row) != width:
                raise DimensionError("ragged rows")
            entries.extend(field.reduce(x) for x in row)
        return cls(len(rows), width, tuple(entries), field)

    @classmethod
    def from_array(cls, array: np.ndarray, field: FieldCfg) -> 'MatrixF':
        r, c = array.shape
        return cls(r, c, tuple(field.reduce(x) for x in array.reshape(-1).tolist()), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldCfg) -> 'MatrixF':
        return cls(rows, cols, (0,) * (rows * cols), field)

    @classmethod
    def identity(cls, size: int, field: FieldCfg) -> 'MatrixF':
        return cls.from_rows([[1 if i == j else 0 for j in range(size)] for i in range(size)], field)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> Tuple[Scalar, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[List[Scalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_array(self) -> np.ndarray:
        """Object-dtype numpy copy; Python ints keep 61-bit products exact."""
        array = np.empty((self.rows, self.cols), dtype=object)
        for i in range(self.rows):
            array[i, :] = self.row(i)
        return array

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def transpose(self) -> 'MatrixF':
        return MatrixF.from_rows([[self.entries[i * self.cols + j] for i in range(self.rows)]
                                  for j in range(self.cols)], self.field, cols=self.rows)

    def stack(self, other: 'MatrixF') -> 'MatrixF':
        """Rows of ``self`` followed by rows of ``other``."""
        if self.cols != other.cols:
            raise DimensionError(f"cannot stack {self.cols} columns onto {other.cols}")
        return MatrixF(self.rows + other.rows, self.cols, self.entries + other.entries, self.field)

    def matmul(self, other: 'MatrixF') -> 'MatrixF':
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.rows == 0 or other.cols == 0:
            return MatrixF.zeros(self.rows, other.cols, self.field)
        if self.cols == 0:
            return MatrixF.zeros(self.rows, other.cols, self.field)
        product = self.to_array().dot(other.to_array())
        return MatrixF.from_array(product, self.field)

    def apply(self, vector: Sequence[Scalar]) -> List[Scalar]:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise DimensionError(f"vector of length {len(vector)} for {self.cols} columns")
        return [self.field.reduce(sum(a * b for a, b in zip(self.row(i), vector)))
                for i in range(self.rows)]


def stack_all(blocks: Sequence[MatrixF], field: FieldCfg, cols: int) -> MatrixF:
    """Vertical concatenation of any number of blocks (possibly none)."""
    for block in blocks:
        if block.cols != cols:
            raise DimensionError(f"cannot stack {block.cols} columns onto {cols}")
    rows = sum(block.rows for block in blocks)
    return MatrixF(rows, cols, tuple(chain.from_iterable(b.entries for b in blocks)), field)
