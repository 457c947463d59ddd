"""Mermin's star and square, the GHZ state, and the GHZ OR-gate MBQC."""

from __future__ import annotations

import math
from typing import NamedTuple

from ..cocycle import InputGroup
from ..complex import ChainComplex, RelativeComplex, build, contract
from ..fraction import EmpiricalModel, model_from_quantum
from ..gf2 import BitMatrix
from ..mbqc import MbqcSpec
from ..operators import PhasedPauli, StateVector

LOCAL_EDGES = ("X1", "X2", "X3", "Y1", "Y2", "Y3")
NONLOCAL_EDGES = ("XXX", "XYY", "YXY", "YYX")

# f1..f4 are the GHZ stabilizer contexts, f5 the nonlocal line
STAR_FACES = (
    ("f1", ("X1", "X2", "X3", "XXX")),
    ("f2", ("X1", "Y2", "Y3", "XYY")),
    ("f3", ("Y1", "X2", "Y3", "YXY")),
    ("f4", ("Y1", "Y2", "X3", "YYX")),
    ("f5", ("XXX", "XYY", "YXY", "YYX")),
)

SQUARE_EDGES = ("XI", "IX", "XX", "IZ", "ZI", "ZZ", "XZ", "ZX", "YY")
SQUARE_FACES = (
    ("r1", ("XI", "IX", "XX")),
    ("r2", ("IZ", "ZI", "ZZ")),
    ("r3", ("XZ", "ZX", "YY")),
    ("c1", ("XI", "IZ", "XZ")),
    ("c2", ("IX", "ZI", "ZX")),
    ("c3", ("XX", "ZZ", "YY")),
)


def _local(label: str) -> PhasedPauli:
    kind, site = label[0], int(label[1]) - 1
    chars = ["I"] * 3
    chars[site] = kind
    return PhasedPauli.from_string("".join(chars))


def star_edges() -> list[tuple[str, PhasedPauli]]:
    edges = [(a, _local(a)) for a in LOCAL_EDGES]
    edges += [(a, PhasedPauli.from_string(a)) for a in NONLOCAL_EDGES]
    return edges


def ghz_state(n: int = 3) -> StateVector:
    amp = [0.0] * (1 << n)
    amp[0] = amp[-1] = 1 / math.sqrt(2)
    return StateVector(amp)


def mermin_star() -> ChainComplex:
    """State-independent Mermin star: ten Pauli edges, five faces."""
    return build(star_edges(), faces=STAR_FACES)


def mermin_star_ghz_complex() -> ChainComplex:
    """Mermin star with the GHZ state and its four stabilizer edges in ``E0``."""
    return build(star_edges(), NONLOCAL_EDGES, faces=STAR_FACES, state=ghz_state())


def mermin_star_ghz() -> RelativeComplex:
    return contract(mermin_star_ghz_complex())


def mermin_square() -> ChainComplex:
    edges = [(a, PhasedPauli.from_string(a)) for a in SQUARE_EDGES]
    return build(edges, faces=SQUARE_FACES)


def ghz_input_group() -> InputGroup:
    # q1 = y, q2 = z, q3 = y + z
    S = BitMatrix.from_lists([[1, 0], [0, 1], [1, 1]])
    return InputGroup(2, (("X1", "Y1"), ("X2", "Y2"), ("X3", "Y3")), S)


class GhzMbqc(NamedTuple):
    spec: MbqcSpec
    complex: RelativeComplex
    group: InputGroup
    ref_face: str


def ghz_mbqc_spec() -> MbqcSpec:
    X = PhasedPauli.from_string("X")
    Y = PhasedPauli.from_string("Y")
    return MbqcSpec(
        n_sites=3,
        m=2,
        k=1,
        state=ghz_state(),
        obs=((X, Y),) * 3,
        Z=BitMatrix.from_lists([[1, 1, 1]]),
        T=BitMatrix.zeros(3, 3),
        S=ghz_input_group().S,
    )


def ghz_mbqc() -> GhzMbqc:
    """The OR-gate MBQC on GHZ together with its complex, input group and reference face."""
    return GhzMbqc(ghz_mbqc_spec(), mermin_star_ghz(), ghz_input_group(), "f1")


GHZ_CONTEXTS = (
    ("c00", ("X1", "X2", "X3")),
    ("c01", ("X1", "Y2", "Y3")),
    ("c10", ("Y1", "X2", "Y3")),
    ("c11", ("Y1", "Y2", "X3")),
)


def ghz_model() -> EmpiricalModel:
    """Born-rule statistics of GHZ on the four local Mermin-star contexts."""
    # edges listed in order of first appearance, matching the text format
    observables = {a: _local(a) for _, ctx in GHZ_CONTEXTS for a in ctx}
    return model_from_quantum(ghz_state(), observables, GHZ_CONTEXTS)
