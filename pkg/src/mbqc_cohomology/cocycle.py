"""Input-group action, output functions from ``beta_psi``, and gauge classes.

For a temporally flat MBQC, input bit ``j`` swaps the two observables
``(a_i, abar_i)`` of every site ``i`` with ``S[i][j] = 1``.  The computed
function is read off the cocycle as ``o(q) = beta_psi(q(f_e))`` for the
reference face ``f_e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .boolean import BooleanFunction, input_bits
from .complex import RelativeComplex, contract, with_representatives
from .errors import GaugeError, GuardExceeded, ImageNotAFace, UnpairedEdge, ValidationError
from .gf2 import BitMatrix, BitVector


@dataclass(frozen=True)
class InputGroup:
    """``Q = Z_2^m`` acting on edge pairs through the rows of ``S``."""

    m: int
    pairs: tuple[tuple[str, str], ...]
    S: BitMatrix

    def __post_init__(self):
        if self.S.shape != (len(self.pairs), self.m):
            raise ValidationError(f"S has shape {self.S.shape}, expected ({len(self.pairs)}, {self.m})")
        flat = [a for pair in self.pairs for a in pair]
        if len(set(flat)) != len(flat):
            raise ValidationError("an edge appears in more than one pair")

    def partner(self, edge: str) -> tuple[int, str]:
        for site, (a, abar) in enumerate(self.pairs):
            if edge == a:
                return site, abar
            if edge == abar:
                return site, a
        raise UnpairedEdge(f"edge {edge!r} belongs to no input pair")

    def elements(self):
        return [input_bits(i, self.m) for i in range(1 << self.m)]


def _as_bits(q, m: int) -> tuple[int, ...]:
    if isinstance(q, int):
        return input_bits(q, m)
    q = tuple(q)
    if len(q) != m:
        raise ValidationError(f"group element has {len(q)} bits, expected {m}")
    return q


def act_edge(group: InputGroup, q, edge: str) -> str:
    q = _as_bits(q, group.m)
    site, other = group.partner(edge)
    flip = sum(b & group.S[site, j] for j, b in enumerate(q)) & 1
    return other if flip else edge


def _face_lookup(rc: RelativeComplex) -> dict[frozenset[str], str]:
    lookup: dict[frozenset[str], str] = {}
    for f in rc.faces:
        lookup.setdefault(f.edges - rc.e0, f.id)
    return lookup


def act_face(rc: RelativeComplex, group: InputGroup, q, face_id: str, _lookup=None) -> str:
    lookup = _lookup if _lookup is not None else _face_lookup(rc)
    image = frozenset(act_edge(group, q, a) for a in rc.relative_edges(face_id))
    try:
        return lookup[image]
    except KeyError:
        raise ImageNotAFace(
            f"image of face {face_id!r} under {tuple(_as_bits(q, group.m))} has boundary "
            f"{sorted(image)}, which bounds no face"
        ) from None


def face_images(rc: RelativeComplex, group: InputGroup, ref_face: str) -> list[str]:
    """``q(f_e)`` for every input ``q``, indexed like a truth table."""
    lookup = _face_lookup(rc)
    return [act_face(rc, group, q, ref_face, lookup) for q in range(1 << group.m)]


def output_function(rc: RelativeComplex, group: InputGroup, ref_face: str) -> BooleanFunction:
    return BooleanFunction(group.m, tuple(rc.beta_psi_of(f) for f in face_images(rc, group, ref_face)))


def gauge_apply(rc: RelativeComplex, gamma: Mapping[str, int]) -> RelativeComplex:
    """Flip ``T_a -> -T_a`` wherever ``gamma(a) = 1`` and recompute the cocycle."""
    surviving = set(rc.edge_ids)
    for a, bit in gamma.items():
        if a in rc.e0:
            raise GaugeError(f"gauge touches E0 edge {a!r}")
        if a not in surviving:
            raise GaugeError(f"gauge references unknown edge {a!r}")
    flips = {a for a, bit in gamma.items() if bit & 1}
    if not flips:
        return rc
    parent = rc.parent
    reps = {e.id: -e.representative for e in parent.edges if e.id in flips}
    new_rc = contract(with_representatives(parent, reps))
    g = BitVector.from_list([1 if a in flips else 0 for a in rc.edge_ids])
    expected = rc.beta_psi ^ (rc.coboundary() @ g)
    if new_rc.beta_psi != expected:
        raise AssertionError("recomputed beta_psi disagrees with beta_psi + d gamma")
    return new_rc


def output_class(
    rc: RelativeComplex, group: InputGroup, ref_face: str, guard: int = 20
) -> frozenset[BooleanFunction]:
    """All output functions ``(beta_psi + d gamma)(q f_e)`` over every gauge ``gamma``."""
    n = len(rc.edges)
    if n > guard:
        raise GuardExceeded(f"{n} surviving edges exceed the gauge enumeration guard {guard}")
    images = [rc.face_index(f) for f in face_images(rc, group, ref_face)]
    index = {a: i for i, a in enumerate(rc.edge_ids)}
    masks = []
    for fi in images:
        mask = 0
        for a in rc.faces[fi].edges - rc.e0:
            mask |= 1 << index[a]
        masks.append(mask)
    base = [rc.beta_psi[fi] for fi in images]
    seen = set()
    for gamma in range(1 << n):
        seen.add(tuple(b ^ ((gamma & mk).bit_count() & 1) for b, mk in zip(base, masks)))
    return frozenset(BooleanFunction(group.m, t) for t in seen)


def class_representative(functions) -> BooleanFunction:
    """Lexicographically least truth table; a display choice, not a canonical form."""
    return min(functions, key=lambda f: f.table)


def gauge_from_bits(rc: RelativeComplex, bits: Sequence[int]) -> dict[str, int]:
    return dict(zip(rc.edge_ids, bits))
