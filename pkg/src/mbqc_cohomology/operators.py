"""±1-eigenvalue observables in two backends: phased Pauli words and dense matrices.

A :class:`PhasedPauli` on ``n`` sites stores ``i**phase * prod_j X^x_j Z^z_j``
with the X and Z exponents packed into ints.  Site 0 is the leftmost
character of a Pauli string and the most significant bit of both the packed
exponents and a computational-basis index, which makes
``X^x Z^z |b> = (-1)^{|z & b|} |b ^ x>`` hold directly on integers.

Dense operators and states use the same site ordering (``np.kron`` from
site 0 outward).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import BackendMismatch, DimensionMismatch, NotAnObservable, ParseError, ValidationError

TAU_NUM = 1e-9
MAX_DENSE_DIM = 2**10

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_PHASE_VALUES = (1, 1j, -1, -1j)


@dataclass(frozen=True)
class PhasedPauli:
    n: int
    phase: int
    x: int
    z: int

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)
        limit = 1 << self.n
        if self.x >= limit or self.z >= limit or self.x < 0 or self.z < 0:
            raise ValueError("Pauli exponents exceed the number of sites")

    @classmethod
    def from_string(cls, text: str) -> "PhasedPauli":
        """Parse ``[+|-]`` followed by one of ``IXYZ`` per site, e.g. ``-XYY``."""
        sign = 0
        body = text
        if body and body[0] in "+-":
            sign = 2 if body[0] == "-" else 0
            body = body[1:]
        if not body:
            raise ParseError(f"empty Pauli string {text!r}")
        n = len(body)
        x = z = 0
        n_y = 0
        for j, ch in enumerate(body):
            bit = 1 << (n - 1 - j)
            if ch == "X":
                x |= bit
            elif ch == "Z":
                z |= bit
            elif ch == "Y":
                x |= bit
                z |= bit
                n_y += 1
            elif ch != "I":
                raise ParseError(f"invalid Pauli character {ch!r} in {text!r}", column=j + 1)
        # Y = i X Z
        return cls(n, sign + n_y, x, z)

    @classmethod
    def identity(cls, n: int) -> "PhasedPauli":
        return cls(n, 0, 0, 0)

    def _n_y(self) -> int:
        return (self.x & self.z).bit_count()

    def sign_exponent(self) -> int | None:
        """``s`` with ``self = (-1)^s * (unsigned word)``, or None for an ``±i`` phase."""
        rel = (self.phase - self._n_y()) % 4
        if rel % 2:
            return None
        return rel // 2

    def is_observable(self) -> bool:
        return self.sign_exponent() is not None

    def to_string(self) -> str:
        s = self.sign_exponent()
        if s is None:
            raise NotAnObservable("Pauli word with phase ±i has no signed string form")
        chars = []
        for j in range(self.n):
            bit = 1 << (self.n - 1 - j)
            chars.append("IZXY"[(2 if self.x & bit else 0) + (1 if self.z & bit else 0)])
        return ("-" if s else "+") + "".join(chars)

    def __str__(self) -> str:
        if self.is_observable():
            return self.to_string()
        unsigned = PhasedPauli(self.n, self._n_y(), self.x, self.z).to_string()[1:]
        return ("-i" if (self.phase - self._n_y()) % 4 == 3 else "+i") + unsigned

    def __neg__(self) -> "PhasedPauli":
        return PhasedPauli(self.n, self.phase + 2, self.x, self.z)

    def __matmul__(self, other: "PhasedPauli") -> "PhasedPauli":
        if not isinstance(other, PhasedPauli):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n}-site and {other.n}-site Pauli words")
        # Z^z X^x' = (-1)^{z.x'} X^x' Z^z sitewise
        swap = (self.z & other.x).bit_count()
        return PhasedPauli(self.n, self.phase + other.phase + 2 * swap, self.x ^ other.x, self.z ^ other.z)

    def commutes(self, other: "PhasedPauli") -> bool:
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n}-site and {other.n}-site Pauli words")
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def scalar_sign(self) -> int | None:
        if self.x or self.z or self.phase % 2:
            return None
        return self.phase // 2

    def squares_to_identity(self) -> bool:
        return (self @ self).scalar_sign() == 0

    @property
    def dim(self) -> int:
        return 1 << self.n

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        idx = np.arange(self.dim)
        signs = np.array([(-1) ** (int(b) & self.z).bit_count() for b in idx])
        out = np.empty_like(amplitudes, dtype=complex)
        out[idx ^ self.x] = signs * amplitudes
        return _PHASE_VALUES[self.phase] * out

    def to_dense(self) -> "DenseOperator":
        mat = np.array([[1.0 + 0j]])
        for j in range(self.n):
            bit = 1 << (self.n - 1 - j)
            factor = I2
            if self.x & bit:
                factor = PAULI_X
            if self.z & bit:
                factor = factor @ PAULI_Z
            mat = np.kron(mat, factor)
        return DenseOperator(_PHASE_VALUES[self.phase] * mat)


class DenseOperator:
    """A ``dim x dim`` complex matrix with ``dim`` a power of two."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, max_dim: int = MAX_DENSE_DIM):
        mat = np.array(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"operator must be square, got shape {mat.shape}")
        dim = mat.shape[0]
        if dim < 1 or dim & (dim - 1):
            raise DimensionMismatch(f"dimension {dim} is not a power of two")
        if dim > max_dim:
            raise DimensionMismatch(f"dimension {dim} exceeds the dense cap {max_dim}")
        mat.setflags(write=False)
        self.matrix = mat

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.dim.bit_length() - 1

    def __repr__(self) -> str:
        return f"DenseOperator(dim={self.dim})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseOperator):
            return NotImplemented
        return self.dim == other.dim and np.allclose(self.matrix, other.matrix, atol=TAU_NUM, rtol=0)

    __hash__ = None

    def __neg__(self) -> "DenseOperator":
        return DenseOperator(-self.matrix)

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        if not isinstance(other, DenseOperator):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatch(f"dims {self.dim} and {other.dim}")
        return DenseOperator(self.matrix @ other.matrix)

    def commutes(self, other: "DenseOperator") -> bool:
        if other.dim != self.dim:
            raise DimensionMismatch(f"dims {self.dim} and {other.dim}")
        comm = self.matrix @ other.matrix - other.matrix @ self.matrix
        return bool(np.max(np.abs(comm), initial=0.0) <= TAU_NUM)

    def scalar_sign(self) -> int | None:
        eye = np.eye(self.dim)
        if np.max(np.abs(self.matrix - eye)) <= TAU_NUM:
            return 0
        if np.max(np.abs(self.matrix + eye)) <= TAU_NUM:
            return 1
        return None

    def is_observable(self) -> bool:
        m = self.matrix
        hermitian = np.max(np.abs(m - m.conj().T)) <= TAU_NUM
        involution = np.max(np.abs(m @ m - np.eye(self.dim))) <= TAU_NUM
        return bool(hermitian and involution)

    def squares_to_identity(self) -> bool:
        return (self @ self).scalar_sign() == 0

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.matrix @ amplitudes

    def to_dense(self) -> "DenseOperator":
        return self

    def kron(self, other: "DenseOperator") -> "DenseOperator":
        return DenseOperator(np.kron(self.matrix, other.matrix))


Observable = Union[PhasedPauli, DenseOperator]


class StateVector:
    """Unit-norm amplitude vector over ``n`` qubits (site 0 most significant)."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, normalize: bool = False):
        amp = np.array(amplitudes, dtype=complex).reshape(-1)
        dim = amp.shape[0]
        if dim < 1 or dim & (dim - 1):
            raise DimensionMismatch(f"state dimension {dim} is not a power of two")
        norm2 = float(np.vdot(amp, amp).real)
        if normalize:
            if norm2 == 0:
                raise ValidationError("zero vector cannot be normalized")
            amp = amp / math.sqrt(norm2)
        elif abs(norm2 - 1.0) > 1e-12:
            raise ValidationError(f"state is not normalized (norm^2 = {norm2!r})")
        amp.setflags(write=False)
        self.amplitudes = amp

    @classmethod
    def basis(cls, n: int, index: int) -> "StateVector":
        amp = np.zeros(1 << n, dtype=complex)
        amp[index] = 1
        return cls(amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def n(self) -> int:
        return self.dim.bit_length() - 1

    def __repr__(self) -> str:
        return f"StateVector(n={self.n})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.dim == other.dim and np.allclose(self.amplitudes, other.amplitudes, atol=TAU_NUM, rtol=0)

    __hash__ = None

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def _check_pair(a: Observable, b: Observable) -> None:
    if type(a) is not type(b):
        raise BackendMismatch(f"cannot combine {type(a).__name__} with {type(b).__name__}")
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims {a.dim} and {b.dim}")


def multiply(a: Observable, b: Observable) -> Observable:
    _check_pair(a, b)
    return a @ b


def commutes(a: Observable, b: Observable) -> bool:
    _check_pair(a, b)
    return a.commutes(b)


def scalar_sign(a: Observable) -> int | None:
    """Return ``b`` if ``a == (-1)^b I``, else None."""
    return a.scalar_sign()


def eigensign(a: Observable, psi: StateVector) -> int | None:
    """Return ``mu`` if ``a psi == (-1)^mu psi`` within tolerance, else None."""
    if a.dim != psi.dim:
        raise DimensionMismatch(f"operator dim {a.dim}, state dim {psi.dim}")
    image = a.apply(psi.amplitudes)
    for mu, sign in ((0, 1.0), (1, -1.0)):
        if np.linalg.norm(image - sign * psi.amplitudes) <= TAU_NUM:
            return mu
    return None


def product(ops) -> Observable:
    """Product of a non-empty sequence of observables, left to right."""
    ops = list(ops)
    if not ops:
        raise ValueError("empty product")
    acc = ops[0]
    for op in ops[1:]:
        acc = multiply(acc, op)
    return acc


def as_dense(a: Observable) -> DenseOperator:
    return a.to_dense()


def embed(single: Observable, site: int, n: int) -> DenseOperator:
    """Lift a one-site operator to ``n`` sites as a dense operator."""
    mat = single.to_dense().matrix
    if mat.shape != (2, 2):
        raise DimensionMismatch("embed expects a single-site operator")
    return DenseOperator(np.kron(np.kron(np.eye(1 << site), mat), np.eye(1 << (n - site - 1))))


def rotated_xy(k: int, N: int) -> DenseOperator:
    """``cos(k pi/N) X + sin(k pi/N) Y`` as a 2x2 operator; ``k`` is taken mod ``2N``."""
    if N < 2 or N % 2:
        raise ValueError(f"N must be an even integer >= 2, got {N}")
    return xy_rotation(k, N)


def xy_rotation(k: int, N: int) -> DenseOperator:
    """As :func:`rotated_xy` for any ``N >= 1``; odd ``N`` serves diagnostics only."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    k %= 2 * N
    angle = k * math.pi / N
    # exact values at multiples of pi/2 keep products free of rounding noise
    c, s = math.cos(angle), math.sin(angle)
    if (2 * k) % N == 0:
        c, s = round(c), round(s)
    return DenseOperator(c * PAULI_X + s * PAULI_Y)


def load_dense(text: str) -> DenseOperator:
    """Parse the dense text format: ``dim`` then ``dim**2`` ``re im`` pairs row-major."""
    tokens = text.split()
    if not tokens:
        raise ParseError("empty dense operator file")
    try:
        dim = int(tokens[0])
    except ValueError:
        raise ParseError(f"bad dimension {tokens[0]!r}") from None
    if dim < 1 or dim > MAX_DENSE_DIM:
        raise ParseError(f"dimension {dim} outside [1, {MAX_DENSE_DIM}]")
    values = tokens[1:]
    if len(values) != 2 * dim * dim:
        raise ParseError(f"expected {2 * dim * dim} numbers after dimension, got {len(values)}")
    try:
        nums = [float(v) for v in values]
    except ValueError as exc:
        raise ParseError(f"bad number in dense operator: {exc}") from None
    arr = np.array(nums).reshape(dim * dim, 2)
    try:
        return DenseOperator((arr[:, 0] + 1j * arr[:, 1]).reshape(dim, dim))
    except DimensionMismatch as exc:
        raise ParseError(str(exc)) from None


def dump_dense(op: DenseOperator) -> str:
    lines = [str(op.dim)]
    for row in op.matrix:
        lines.append(" ".join(f"{float(v.real)!r} {float(v.imag)!r}" for v in row))
    return "\n".join(lines) + "\n"
