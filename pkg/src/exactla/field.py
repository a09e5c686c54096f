"""Scalar fields for exact linear algebra: a large prime field or the rationals."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Union

from sympy import isprime

from ..utils.config import FieldConfig, MERSENNE_61
from ..utils.errors import PreconditionError

Scalar = Union[int, Fraction]


class FieldMode(Enum):
    """Arithmetic used for ranks and kernels."""
    PRIME = 'prime'
    RATIONAL = 'rational'


@dataclass(frozen=True)
class FieldCfg:
    """A prime field F_p (default p = 2^61 - 1) or the rational numbers.

    In rational mode the modulus is ignored and ``sample_bound`` limits the
    integers drawn for random points.
    """
    modulus: int = MERSENNE_61
    mode: FieldMode = FieldMode.PRIME
    sample_bound: int = 1000

    def __post_init__(self):
        if not isinstance(self.mode, FieldMode):
            object.__setattr__(self, 'mode', FieldMode(self.mode))
        if self.mode is FieldMode.PRIME:
            if not 2**31 < self.modulus < 2**63 or not isprime(self.modulus):
                raise PreconditionError(f"modulus {self.modulus} is not a prime between 2^31 and 2^63")
        if self.sample_bound <= 0:
            raise PreconditionError("sample bound must be positive")

    @classmethod
    def from_config(cls, config: FieldConfig) -> 'FieldCfg':
        return cls(modulus=config.modulus, mode=FieldMode(config.mode), sample_bound=config.sample_bound)

    @classmethod
    def rational(cls, sample_bound: int = 1000) -> 'FieldCfg':
        return cls(mode=FieldMode.RATIONAL, sample_bound=sample_bound)

    @property
    def is_prime(self) -> bool:
        return self.mode is FieldMode.PRIME

    @property
    def sample_size(self) -> int:
        """Number of values a random scalar is drawn from."""
        return self.modulus if self.is_prime else 2 * self.sample_bound + 1

    def reduce(self, value: Scalar) -> Scalar:
        """Canonical representative of ``value`` in this field."""
        if self.is_prime:
            if isinstance(value, Fraction):
                return value.numerator * pow(value.denominator, self.modulus - 2, self.modulus) % self.modulus
            return int(value) % self.modulus
        if isinstance(value, Fraction):
            return value.numerator if value.denominator == 1 else value
        return int(value)

    def inverse(self, value: Scalar) -> Scalar:
        if value == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.is_prime:
            return pow(int(value), self.modulus - 2, self.modulus)
        return self.reduce(Fraction(1) / Fraction(value))

    def is_zero(self, value: Scalar) -> bool:
        return self.reduce(value) == 0

    def describe(self) -> Dict[str, Any]:
        if self.is_prime:
            return {'mode': self.mode.value, 'modulus': str(self.modulus)}
        return {'mode': self.mode.value, 'sample_bound': self.sample_bound}


def schwartz_zippel_bound(degree: int, field: FieldCfg) -> Fraction:
    """Probability bound that a nonzero polynomial of ``degree`` vanishes at a random sample."""
    return min(Fraction(1), Fraction(max(degree, 0), field.sample_size))
