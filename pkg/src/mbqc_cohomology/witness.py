"""Cohomological contextuality witness on a relative complex.

A non-contextual value assignment ``s`` exists iff ``d s = beta_psi`` is
solvable over GF(2).  By duality, unsolvability is certified by a relative
2-cycle ``z`` (``boundary z = 0``) with ``beta_psi(z) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex import RelativeComplex
from .errors import DimensionMismatch
from .gf2 import BitVector, kernel_basis, rank, solve


@dataclass(frozen=True)
class NonContextual:
    assignment: dict[str, int]

    contextual = False


@dataclass(frozen=True)
class Contextual:
    certificate: BitVector

    contextual = True

    def faces(self, rc: RelativeComplex) -> list[str]:
        return [rc.faces[i].id for i in self.certificate.support()]


Verdict = NonContextual | Contextual


def decide(rc: RelativeComplex) -> Verdict:
    d = rc.coboundary()
    s = solve(d, rc.beta_psi)
    if s is not None:
        return NonContextual(dict(zip(rc.edge_ids, s.to_list())))
    for z in kernel_basis(rc.boundary):
        if rc.beta_psi.dot(z):
            return Contextual(z)
    raise AssertionError("unsolvable cocycle equation without an odd relative cycle")


def check_certificate(rc: RelativeComplex, z: BitVector) -> bool:
    if z.length != len(rc.faces):
        raise DimensionMismatch(f"certificate has length {z.length}, complex has {len(rc.faces)} faces")
    return (rc.boundary @ z).weight() == 0 and rc.beta_psi.dot(z) == 1


def check_assignment(rc: RelativeComplex, assignment: dict[str, int]) -> bool:
    s = BitVector.from_list([assignment[a] for a in rc.edge_ids])
    return rc.coboundary() @ s == rc.beta_psi


def h2_dimension(rc: RelativeComplex) -> int:
    """``dim ker d2 - rank d1``; without volumes ``d2`` is zero."""
    n_faces = len(rc.faces)
    rank_d1 = rank(rc.coboundary())
    if rc.volumes:
        d2 = rc.volume_matrix().transpose()
        ker_d2 = n_faces - rank(d2)
    else:
        ker_d2 = n_faces
    return ker_d2 - rank_d1

