"""The three-qubit "iffy" scenario family.

Qubits 1, 2, 3 of the text map to sites 0, 1, 2.  Qubits 1 and 2 are
measured in rotated bases ``X_k = cos(k pi/N) X + sin(k pi/N) Y`` and qubit 3
in ``X`` or ``Y``.  Two kinds of complex are built:

* the deiffified complex, where the basis choice conditioned on qubit 3 is
  carried by the correlated observables ``eps_k`` and ``sigma^±_k``;
* the conditional complexes, one per value ``c1`` of the qubit-3 ``Y``
  outcome, built on the projected relations.

Edge classes ``{±T}``: since ``X_{k+N} = -X_k`` and ``eps_{k+N} = -eps_k``
these have ``N`` classes each, stored with representatives of index
``1..N``; ``sigma^±_k`` has ``2N`` distinct classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..complex import RelativeComplex, build, contract
from ..errors import BoundaryNotClosed, ValidationError
from ..gf2 import BitMatrix, BitVector
from ..operators import PAULI_X, PAULI_Y, DenseOperator, StateVector, eigensign, xy_rotation

_I2 = np.eye(2)
_P_PLUS = (np.eye(2) + PAULI_Y) / 2
_P_MINUS = (np.eye(2) - PAULI_Y) / 2


def _kron3(a, b, c) -> DenseOperator:
    return DenseOperator(np.kron(np.kron(a, b), c))


def _check_n(N: int, allow_odd: bool = False) -> None:
    if not isinstance(N, int) or N < 2:
        raise ValidationError(f"N must be an integer >= 2, got {N!r}")
    if N % 2 and not allow_odd:
        raise ValidationError(f"N must be even, got {N}")


@dataclass(frozen=True)
class IffyParameters:
    N: int

    @property
    def angle(self) -> float:
        """The state angle ``pi/2 - pi/N``."""
        return math.pi / 2 - math.pi / self.N


class IffyObservables:
    """Dense 3-qubit operators of the iffy scenario for a fixed ``N``."""

    def __init__(self, N: int):
        if N < 2:
            raise ValidationError(f"N must be >= 2, got {N}")
        self.N = N

    def rot(self, k: int) -> np.ndarray:
        return xy_rotation(k, self.N).matrix

    def x1(self, k: int) -> DenseOperator:
        return _kron3(self.rot(k), _I2, _I2)

    def x2(self, k: int) -> DenseOperator:
        return _kron3(_I2, self.rot(k), _I2)

    @cached_property
    def x3(self) -> DenseOperator:
        return _kron3(_I2, _I2, PAULI_X)

    @cached_property
    def y3(self) -> DenseOperator:
        return _kron3(_I2, _I2, PAULI_Y)

    def projector(self, c1: int) -> DenseOperator:
        """``P_{y,+}`` for ``c1 = 0`` and ``P_{y,-}`` for ``c1 = 1`` on qubit 3."""
        return _kron3(_I2, _I2, _P_MINUS if c1 else _P_PLUS)

    def tau(self, k: int) -> DenseOperator:
        N = self.N
        return DenseOperator(
            np.kron(np.kron(self.rot(N - 1 - k), self.rot(k)), _P_PLUS)
            + np.kron(np.kron(self.rot(N + 1 - k), self.rot(k)), _P_MINUS)
        )

    def tau_conditional(self, k: int, c1: int) -> DenseOperator:
        """The qubit-1,2 part of ``tau_k`` selected by the qubit-3 outcome ``c1``."""
        N = self.N
        shift = 1 if c1 else -1
        return _kron3(self.rot(N + shift - k), self.rot(k), _I2)

    def xbar(self, k: int) -> DenseOperator:
        N = self.N
        return _kron3(self.rot(N - k), self.rot(k), PAULI_X)

    def _controlled(self, upper: np.ndarray, lower: np.ndarray) -> DenseOperator:
        # upper acts when qubit 3 is in the +1 eigenspace of Y, lower otherwise
        return DenseOperator(np.kron(np.kron(upper, _I2), _P_PLUS) + np.kron(np.kron(lower, _I2), _P_MINUS))

    def eps(self, k: int) -> DenseOperator:
        return self._controlled(self.rot(k - 1), self.rot(k + 1))

    def sigma_plus(self, k: int) -> DenseOperator:
        return self._controlled(self.rot(k - 1), _I2)

    def sigma_minus(self, k: int) -> DenseOperator:
        return self._controlled(_I2, self.rot(k + 1))


def iffy_state(N: int, allow_odd: bool = False) -> StateVector:
    """``|00>|nu> + |11>|omega>`` normalized, at angle ``pi/2 - pi/N``."""
    _check_n(N, allow_odd)
    lam = IffyParameters(N).angle
    c, s = math.cos(lam / 2), math.sin(lam / 2)
    amp = np.zeros(8, dtype=complex)
    amp[0b000], amp[0b001] = c, s
    amp[0b110], amp[0b111] = s, c
    return StateVector(amp, normalize=True)


def projected_state(N: int, c1: int, allow_odd: bool = False) -> StateVector:
    """``P_{y,±}|Psi>`` renormalized: the state after qubit 3 reads ``Y = (-1)^c1``."""
    ops = IffyObservables(N)
    psi = iffy_state(N, allow_odd)
    return StateVector(ops.projector(c1).apply(psi.amplitudes), normalize=True)


def _x1_id(k: int, N: int) -> str:
    # class representative index in 1..N
    j = k % N
    return f"x1_{j if j else N}"


def _eps_id(k: int, N: int) -> str:
    j = k % N
    return f"eps_{j if j else N}"


def iffy_complex(N: int, allow_odd: bool = False) -> RelativeComplex:
    """Deiffified complex: one stabilizer face of each kind per ``k`` plus the recoupling belt.

    For even ``N`` the sum of all faces is a relative cycle, which is
    asserted.  ``allow_odd`` builds the same pattern for odd ``N`` without
    that assertion, for diagnostics.
    """
    _check_n(N, allow_odd)
    ops = IffyObservables(N)
    two_n = 2 * N
    edges = []
    edges += [(f"x1_{j}", ops.x1(j)) for j in range(1, N + 1)]
    edges += [(f"x2_{j}", ops.x2(j)) for j in range(N)]
    edges += [("x3", ops.x3), ("y3", ops.y3)]
    edges += [(f"eps_{j}", ops.eps(j)) for j in range(1, N + 1)]
    edges += [(f"sp_{k}", ops.sigma_plus(k)) for k in range(two_n)]
    edges += [(f"sm_{k}", ops.sigma_minus(k)) for k in range(two_n)]
    e0 = []
    for k in range(N):
        edges.append((f"tau_{k}", ops.tau(k)))
        edges.append((f"xbar_{k}", ops.xbar(k)))
        e0 += [f"tau_{k}", f"xbar_{k}"]

    faces = []
    for k in range(N):
        faces.append((f"stab_eps_{k}", (_eps_id(N - k, N), f"x2_{k}", f"tau_{k}")))
        faces.append((f"stab_x_{k}", (_x1_id(N - k, N), f"x2_{k}", "x3", f"xbar_{k}")))
    for j in range(1, N + 1):
        faces.append((f"rec_a_{j}", (f"eps_{j}", f"sp_{j}", f"sm_{j}")))
    for j in range(1, N + 1):
        faces.append((f"rec_b_{j}", (f"x1_{j}", f"sp_{(j + 1) % two_n}", f"sm_{(j - 1) % two_n}")))
    faces.append(("rec_c", ("y3", "sp_1", f"sp_{(N + 1) % two_n}")))
    faces.append(("rec_d", ("y3", "sm_0", f"sm_{N}")))

    used = {a for _, members in faces for a in members}
    edges = [(a, op) for a, op in edges if a in used]
    rc = contract(build(edges, e0, faces=faces, state=iffy_state(N, allow_odd)))
    if N % 2 == 0 and (rc.boundary @ rc.surface()).weight():
        raise BoundaryNotClosed(f"iffy({N}) surface has nonzero relative boundary")
    return rc


def iffy_conditional(N: int, c1: int) -> RelativeComplex:
    """Complex for a fixed qubit-3 ``Y`` outcome ``c1``.

    The ``X``-type stabilizer edges take ``mu`` from ``|Psi>``, the projected
    relations take it from the post-measurement state; both via eigensign.
    """
    _check_n(N)
    c1 &= 1
    ops = IffyObservables(N)
    psi = iffy_state(N)
    post = projected_state(N, c1)
    edges = [(f"x1_{j}", ops.x1(j)) for j in range(1, N + 1)]
    edges += [(f"x2_{j}", ops.x2(j)) for j in range(N)]
    edges.append(("x3", ops.x3))
    mu = {}
    e0 = []
    faces = []
    shift = 1 if c1 else -1
    for k in range(N):
        xbar, tauc = ops.xbar(k), ops.tau_conditional(k, c1)
        edges += [(f"xbar_{k}", xbar), (f"tauc_{k}", tauc)]
        e0 += [f"xbar_{k}", f"tauc_{k}"]
        mu[f"xbar_{k}"] = eigensign(xbar, psi)
        mu[f"tauc_{k}"] = eigensign(tauc, post)
        faces.append((f"stab_x_{k}", (_x1_id(N - k, N), f"x2_{k}", "x3", f"xbar_{k}")))
        faces.append((f"cond_{k}", (_x1_id(N + shift - k, N), f"x2_{k}", f"tauc_{k}")))
    if any(v is None for v in mu.values()):
        raise AssertionError("conditional stabilizer relation failed to hold")
    rc = contract(build(edges, e0, faces=faces, mu=mu))
    if (rc.boundary @ rc.surface()).weight():
        raise BoundaryNotClosed(f"conditional iffy({N}) surface has nonzero relative boundary")
    return rc


def iffy_classical_variables(N: int) -> list[str]:
    return [f"a{k}" for k in range(N)] + [f"b{k}" for k in range(N)] + ["c0"]


def iffy_classical_system(N: int, c1: int) -> tuple[BitMatrix, BitVector]:
    """Value-assignment constraints on ``a_k, b_k, c0`` as a mod-2 system.

    Indices run over ``Z_2N``; an outcome for ``X_{k+N} = -X_k`` is the
    flipped outcome for ``X_k``, so every variable is reduced to ``k < N``
    with the flip moved to the right-hand side.  Any ``N >= 2`` is accepted;
    odd ``N`` is the diagnostic case.
    """
    if N < 2:
        raise ValidationError(f"N must be >= 2, got {N}")
    two_n = 2 * N
    lower = 1 if not (c1 & 1) else -1
    rows: list[tuple[int, int]] = []
    seen = set()
    n_vars = 2 * N + 1

    def add(i: int, j: int, with_c0: bool, value: int):
        flips = (i >= N) + (j >= N)
        row = (1 << (i % N)) | (1 << (N + j % N))
        if with_c0:
            row |= 1 << (2 * N)
        rhs = (value + flips) & 1
        if (row, rhs) not in seen:
            seen.add((row, rhs))
            rows.append((row, rhs))

    for i in range(two_n):
        for j in range(two_n):
            total = (i + j) % two_n
            if total == 0:
                add(i, j, True, 0)
            elif total == N:
                add(i, j, True, 1)
            shifted = (i + j + lower) % two_n
            if shifted == 0:
                add(i, j, False, 0)
            elif shifted == N:
                add(i, j, False, 1)
    matrix = BitMatrix(len(rows), n_vars, tuple(r for r, _ in rows))
    rhs = BitVector(len(rows), sum(v << idx for idx, (_, v) in enumerate(rows)))
    return matrix, rhs
