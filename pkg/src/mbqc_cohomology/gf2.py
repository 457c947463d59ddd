"""Linear algebra over GF(2) on bit-packed vectors and matrices.

Rows are stored as Python ints (bit ``j`` of a row is column ``j``), so a
row operation is a single XOR regardless of width.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch


def _pack(bits: Iterable[int]) -> int:
    value = 0
    for j, b in enumerate(bits):
        if b & 1:
            value |= 1 << j
    return value


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits >> self.length:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "BitVector":
        return cls(len(entries), _pack(entries))

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> "BitVector":
        return cls(length, 1 << index)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < self.length:
            raise IndexError(index)
        return (self.bits >> index) & 1

    def __iter__(self):
        return iter(self.to_list())

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise DimensionMismatch(f"lengths {self.length} and {other.length}")
        return BitVector(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def dot(self, other: "BitVector") -> int:
        if self.length != other.length:
            raise DimensionMismatch(f"lengths {self.length} and {other.length}")
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return [j for j in range(self.length) if (self.bits >> j) & 1]

    def to_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.length)]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_list())


@dataclass(frozen=True)
class BitMatrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise ValueError("row count does not match nrows")
        mask = ~((1 << self.ncols) - 1)
        if any(r & mask for r in self.rows):
            raise ValueError("row has bits beyond ncols")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        if any(len(r) != ncols for r in entries):
            raise ValueError("ragged matrix")
        return cls(len(entries), ncols, tuple(_pack(r) for r in entries))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(index)
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.ncols, self.rows[i])

    def column(self, j: int) -> BitVector:
        return BitVector(self.nrows, _pack((r >> j) & 1 for r in self.rows))

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(self.ncols, self.nrows, tuple(cols))

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def __matmul__(self, other):
        if isinstance(other, BitVector):
            if other.length != self.ncols:
                raise DimensionMismatch(f"{self.shape} @ vector of length {other.length}")
            return BitVector(self.nrows, _pack((r & other.bits).bit_count() for r in self.rows))
        if isinstance(other, BitMatrix):
            if other.nrows != self.ncols:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            out = []
            for r in self.rows:
                acc = 0
                j = 0
                while r:
                    if r & 1:
                        acc ^= other.rows[j]
                    r >>= 1
                    j += 1
                out.append(acc)
            return BitMatrix(self.nrows, other.ncols, tuple(out))
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.rows)


def _reduce(rows: list[int], ncols: int) -> list[int]:
    """Reduce ``rows`` in place to reduced row-echelon form; return pivot columns.

    Pivots are chosen left to right; the first row holding a 1 in the pivot
    column is swapped up.
    """
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        bit = 1 << col
        found = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if found is None:
            continue
        rows[r], rows[found] = rows[found], rows[r]
        pivot_row = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pivot_row
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(M: BitMatrix) -> int:
    return len(_reduce(list(M.rows), M.ncols))


def solve(M: BitMatrix, b: BitVector) -> BitVector | None:
    """Return the canonical solution of ``M x = b`` or ``None`` if inconsistent.

    The canonical solution sets every free variable to zero, with pivots
    picked left to right, so the answer is reproducible.
    """
    if b.length != M.nrows:
        raise DimensionMismatch(f"matrix has {M.nrows} rows, right-hand side has length {b.length}")
    n = M.ncols
    rows = [r | (((b.bits >> i) & 1) << n) for i, r in enumerate(M.rows)]
    pivots = _reduce(rows, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = 0
    for i, col in enumerate(pivots):
        if (rows[i] >> n) & 1:
            x |= 1 << col
    return BitVector(n, x)


def kernel_basis(M: BitMatrix) -> list[BitVector]:
    """Basis of ``{x : M x = 0}``, one vector per free column in increasing order."""
    n = M.ncols
    rows = list(M.rows)
    pivots = _reduce(rows, n)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        x = 1 << free
        for i, col in enumerate(pivots):
            if (rows[i] >> free) & 1:
                x |= 1 << col
        basis.append(BitVector(n, x))
    return basis


def nullity(M: BitMatrix) -> int:
    return M.ncols - rank(M)
