"""Boolean functions on (Z_2)^m and their distance to linear functions.

Truth tables are indexed by the integer whose bit ``j`` is input bit ``j``.
The hex form is little-endian in that index: bit ``i`` of the hex integer is
``table[i]``, so OR on two bits (table 0,1,1,1) is ``e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ValidationError


@dataclass(frozen=True, order=True)
class BooleanFunction:
    m: int
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != 1 << self.m:
            raise ValueError(f"table of length {len(self.table)} for m={self.m}")
        if any(v not in (0, 1) for v in self.table):
            raise ValueError("table entries must be 0 or 1")

    @classmethod
    def from_table(cls, table: Sequence[int]) -> "BooleanFunction":
        n = len(table)
        if n < 1 or n & (n - 1):
            raise ValueError("table length must be a power of two")
        return cls(n.bit_length() - 1, tuple(int(v) & 1 for v in table))

    @classmethod
    def from_callable(cls, m: int, fn: Callable[..., int]) -> "BooleanFunction":
        return cls(m, tuple(int(fn(*input_bits(i, m))) & 1 for i in range(1 << m)))

    @classmethod
    def from_hex(cls, text: str, m: int | None = None) -> "BooleanFunction":
        text = text.lower().removeprefix("0x")
        try:
            value = int(text, 16)
        except ValueError:
            raise ValueError(f"not a hex string: {text!r}") from None
        if m is None:
            nbits = 4 * len(text)
            if nbits & (nbits - 1):
                raise ValueError(f"hex string of {len(text)} digits does not fix the arity; pass m")
            m = nbits.bit_length() - 1
        if value >> (1 << m):
            raise ValueError(f"hex value {text!r} has bits beyond 2^{m} entries")
        return cls(m, tuple((value >> i) & 1 for i in range(1 << m)))

    def to_hex(self) -> str:
        value = sum(v << i for i, v in enumerate(self.table))
        digits = max(1, (1 << self.m) // 4)
        return format(value, f"0{digits}x")

    def __call__(self, *bits: int) -> int:
        if len(bits) == 1 and not isinstance(bits[0], int):
            bits = tuple(bits[0])
        return self.table[input_index(bits)]

    def __xor__(self, other: "BooleanFunction") -> "BooleanFunction":
        if other.m != self.m:
            raise ValueError("arity mismatch")
        return BooleanFunction(self.m, tuple(a ^ b for a, b in zip(self.table, other.table)))

    def complement(self) -> "BooleanFunction":
        return BooleanFunction(self.m, tuple(1 - v for v in self.table))

    def weight(self) -> int:
        return sum(self.table)

    def __str__(self) -> str:
        return "".join(map(str, self.table))


def input_bits(index: int, m: int) -> tuple[int, ...]:
    return tuple((index >> j) & 1 for j in range(m))


def input_index(bits: Sequence[int]) -> int:
    return sum((b & 1) << j for j, b in enumerate(bits))


def constant(m: int, value: int) -> BooleanFunction:
    return BooleanFunction(m, (value & 1,) * (1 << m))


def linear(mask: int, m: int) -> BooleanFunction:
    """The function ``x -> mask . x``."""
    return BooleanFunction(m, tuple((mask & i).bit_count() & 1 for i in range(1 << m)))


def walsh_spectrum(f: BooleanFunction) -> list[int]:
    """Walsh-Hadamard coefficients ``W(a) = sum_x (-1)^(f(x) + a.x)`` via butterflies."""
    w = [1 - 2 * v for v in f.table]
    h = 1
    n = len(w)
    while h < n:
        for start in range(0, n, 2 * h):
            for i in range(start, start + h):
                a, b = w[i], w[i + h]
                w[i], w[i + h] = a + b, a - b
        h *= 2
    return w


def distance_to_linear(f: BooleanFunction, affine: bool = False) -> int:
    """Hamming distance to the nearest ``x -> a.x`` (or affine function if ``affine``)."""
    spec = walsh_spectrum(f)
    best = max(abs(c) for c in spec) if affine else max(spec)
    return (1 << (f.m - 1)) - best // 2 if f.m else (0 if affine else f.table[0])


def thm1_threshold(f: BooleanFunction, affine: bool = False) -> Fraction:
    """Non-contextual success bound ``1 - d_H(f) / 2^m``."""
    return 1 - Fraction(distance_to_linear(f, affine), 1 << f.m)


def thm2_bound(f: BooleanFunction, cf: Fraction, affine: bool = False) -> Fraction:
    """Success bound ``1 - (1 - cf) d_H(f) / 2^m`` for a resource with contextual fraction ``cf``."""
    cf = Fraction(cf)
    if not 0 <= cf <= 1:
        raise ValidationError(f"contextual fraction {cf} outside [0, 1]")
    return 1 - (1 - cf) * Fraction(distance_to_linear(f, affine), 1 << f.m)


def is_bent(f: BooleanFunction) -> bool:
    if f.m % 2:
        raise ValidationError("bentness is defined for even m only")
    flat = 1 << (f.m // 2)
    return all(abs(c) == flat for c in walsh_spectrum(f))


OR2 = BooleanFunction(2, (0, 1, 1, 1))
AND2 = BooleanFunction(2, (0, 0, 0, 1))
