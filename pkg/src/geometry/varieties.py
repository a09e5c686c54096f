"""Variety specifications and the command-line spec grammar.

Grammar (whitespace ignored)::

    segre:1,1,1,1,1
    veronese:d=2,n=2
    sv:d=1,2;n=1,3
    grass:k=1,n=4
    gm:d=6
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Tuple

from ..utils.errors import SpecError


class VarietyKind(Enum):
    """Families of varieties the engine knows how to parameterize."""
    SEGRE = 'segre'
    VERONESE = 'veronese'
    SEGRE_VERONESE = 'sv'
    GRASSMANN = 'grass'
    GAUSSIAN_MOMENTS = 'gm'


@dataclass(frozen=True)
class VarietySpec:
    """Which classical variety, with its defining integers.

    Segre, Veronese and Segre-Veronese all use ``degrees``/``dims`` (one entry
    per factor). Grassmann(k, n) is the variety of P^k's in P^n. Gaussian
    moments use ``d``.
    """
    kind: VarietyKind
    degrees: Tuple[int, ...] = field(default=())
    dims: Tuple[int, ...] = field(default=())
    k: int = 0
    n: int = 0
    d: int = 0

    def __post_init__(self):
        self.validate()

    @classmethod
    def segre(cls, *dims: int) -> 'VarietySpec':
        return cls(VarietyKind.SEGRE, degrees=(1,) * len(dims), dims=tuple(dims))

    @classmethod
    def veronese(cls, d: int, n: int) -> 'VarietySpec':
        return cls(VarietyKind.VERONESE, degrees=(d,), dims=(n,))

    @classmethod
    def segre_veronese(cls, degrees, dims) -> 'VarietySpec':
        return cls(VarietyKind.SEGRE_VERONESE, degrees=tuple(degrees), dims=tuple(dims))

    @classmethod
    def grassmann(cls, k: int, n: int) -> 'VarietySpec':
        return cls(VarietyKind.GRASSMANN, k=k, n=n)

    @classmethod
    def gaussian_moments(cls, d: int) -> 'VarietySpec':
        return cls(VarietyKind.GAUSSIAN_MOMENTS, d=d)

    def validate(self) -> None:
        """Check the family constraints.

        Raises:
            SpecError: Naming the violated constraint
        """
        if self.kind in (VarietyKind.SEGRE, VarietyKind.VERONESE, VarietyKind.SEGRE_VERONESE):
            if len(self.degrees) != len(self.dims):
                raise SpecError("degree and dimension lists must have equal length")
            if not self.dims:
                raise SpecError("at least one factor is required")
            if any(n < 1 for n in self.dims):
                raise SpecError("factor dimensions must be positive")
            if any(d < 1 for d in self.degrees):
                raise SpecError("degrees must be at least 1")
        if self.kind is VarietyKind.SEGRE:
            if len(self.dims) < 2:
                raise SpecError("Segre needs at least 2 factors")
            if any(d != 1 for d in self.degrees):
                raise SpecError("Segre factors have degree 1")
        elif self.kind is VarietyKind.VERONESE:
            if len(self.dims) != 1:
                raise SpecError("Veronese has exactly one factor")
        elif self.kind is VarietyKind.GRASSMANN:
            if not 0 <= self.k < self.n:
                raise SpecError(f"Grassmann needs 0 <= k < n, got k={self.k}, n={self.n}")
        elif self.kind is VarietyKind.GAUSSIAN_MOMENTS:
            if self.d < 3:
                raise SpecError(f"Gaussian moments need d >= 3, got d={self.d}")

    @property
    def is_product(self) -> bool:
        """True for the Segre-Veronese family (Segre and Veronese included)."""
        return self.kind in (VarietyKind.SEGRE, VarietyKind.VERONESE, VarietyKind.SEGRE_VERONESE)

    @property
    def is_segre(self) -> bool:
        return self.is_product and len(self.dims) >= 2 and all(d == 1 for d in self.degrees)

    @property
    def is_veronese(self) -> bool:
        return self.is_product and len(self.dims) == 1

    @property
    def label(self) -> str:
        """Canonical spec string; ``parse_spec(spec.label) == spec``."""
        if self.kind is VarietyKind.SEGRE:
            return 'segre:' + ','.join(map(str, self.dims))
        if self.kind is VarietyKind.VERONESE:
            return f'veronese:d={self.degrees[0]},n={self.dims[0]}'
        if self.kind is VarietyKind.SEGRE_VERONESE:
            return (f"sv:d={','.join(map(str, self.degrees))};"
                    f"n={','.join(map(str, self.dims))}")
        if self.kind is VarietyKind.GRASSMANN:
            return f'grass:k={self.k},n={self.n}'
        return f'gm:d={self.d}'

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'kind': self.kind.value, 'spec': self.label}
        if self.is_product:
            data['degrees'] = list(self.degrees)
            data['dims'] = list(self.dims)
        elif self.kind is VarietyKind.GRASSMANN:
            data['k'] = self.k
            data['n'] = self.n
        else:
            data['d'] = self.d
        return data


_KEYED = re.compile(r'^([a-z]+)=(.+)$')


def _int_list(text: str, what: str):
    try:
        values = tuple(int(x) for x in text.split(','))
    except ValueError:
        raise SpecError(f"expected comma-separated integers for {what}, got '{text}'") from None
    return values


def _keyed(body: str, separator: str, expected) -> Dict[str, str]:
    parts = {}
    for chunk in body.split(separator):
        match = _KEYED.match(chunk)
        if not match:
            raise SpecError(f"expected key=value, got '{chunk}'")
        parts[match.group(1)] = match.group(2)
    if set(parts) != set(expected):
        raise SpecError(f"expected keys {sorted(expected)}, got {sorted(parts)}")
    return parts


def parse_spec(text: str) -> VarietySpec:
    """Parse a CLI variety spec string.

    Raises:
        SpecError: On unknown kinds, malformed bodies or invalid parameters
    """
    cleaned = re.sub(r'\s+', '', text or '')
    if ':' not in cleaned:
        raise SpecError(f"spec '{text}' must look like kind:parameters")
    kind, body = cleaned.split(':', 1)

    if kind == 'segre':
        return VarietySpec.segre(*_int_list(body, 'segre dimensions'))
    if kind == 'veronese':
        parts = _keyed(body, ',', ('d', 'n'))
        return VarietySpec.veronese(_int_list(parts['d'], 'd')[0], _int_list(parts['n'], 'n')[0])
    if kind == 'sv':
        parts = _keyed(body, ';', ('d', 'n'))
        return VarietySpec.segre_veronese(_int_list(parts['d'], 'degrees'),
                                          _int_list(parts['n'], 'dimensions'))
    if kind == 'grass':
        parts = _keyed(body, ',', ('k', 'n'))
        return VarietySpec.grassmann(_int_list(parts['k'], 'k')[0], _int_list(parts['n'], 'n')[0])
    if kind == 'gm':
        parts = _keyed(body, ',', ('d',))
        return VarietySpec.gaussian_moments(_int_list(parts['d'], 'd')[0])
    raise SpecError(f"unknown variety kind '{kind}'")
