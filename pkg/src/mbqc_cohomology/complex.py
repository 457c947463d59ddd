"""Chain complexes C(E) and relative complexes C(E, E0) built from observables.

Edges are observable classes ``{±T_a}`` with one stored representative.
Faces are sets of pairwise commuting edges whose representatives multiply to
``±I``; the sign exponent ``beta`` is always computed from the operator
product.  Contracting the ``E0`` edges (those with the resource state as an
eigenstate) yields the relative complex with ``beta_psi = beta + d mu``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .errors import (
    DuplicateEdge,
    InvalidVolume,
    NonCommutingFace,
    NonScalarFace,
    NotAnObservable,
    NotEigenstate,
    UnknownEdge,
    ValidationError,
    BackendMismatch,
)
from .gf2 import BitMatrix, BitVector
from .operators import Observable, StateVector, commutes, eigensign, product


@dataclass(frozen=True)
class EdgeClass:
    id: str
    representative: Observable = field(compare=False)


@dataclass(frozen=True)
class Face:
    id: str
    edges: frozenset[str]
    beta: int


@dataclass(frozen=True, eq=False)
class ChainComplex:
    edges: tuple[EdgeClass, ...]
    e0: frozenset[str]
    mu: Mapping[str, int]
    faces: tuple[Face, ...]
    volumes: tuple[tuple[str, frozenset[str]], ...] = ()
    state: StateVector | None = None
    # face-local edge order as declared, kept for serialization
    face_order: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def edge_ids(self) -> list[str]:
        return [e.id for e in self.edges]

    @property
    def face_ids(self) -> list[str]:
        return [f.id for f in self.faces]

    def edge(self, edge_id: str) -> EdgeClass:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise UnknownEdge(edge_id)

    def face(self, face_id: str) -> Face:
        for f in self.faces:
            if f.id == face_id:
                return f
        raise KeyError(face_id)

    def mu_full(self) -> dict[str, int]:
        """``mu`` extended by zero off ``E0``."""
        return {e.id: (self.mu[e.id] if e.id in self.e0 else 0) for e in self.edges}

    def beta(self) -> BitVector:
        return BitVector.from_list([f.beta for f in self.faces])

    def boundary_matrix(self) -> BitMatrix:
        """Full boundary map (edges x faces)."""
        return _incidence(self.edge_ids, self.faces)

    def coboundary_matrix(self) -> BitMatrix:
        return self.boundary_matrix().transpose()

    def volume_matrix(self) -> BitMatrix:
        """Boundary map C3 -> C2 (faces x volumes)."""
        index = {f.id: i for i, f in enumerate(self.faces)}
        cols = [[0] * len(self.volumes) for _ in self.faces]
        for j, (_, faces) in enumerate(self.volumes):
            for fid in faces:
                cols[index[fid]][j] = 1
        return BitMatrix.from_lists(cols, len(self.volumes))


def _incidence(edge_ids: Sequence[str], faces: Sequence[Face]) -> BitMatrix:
    index = {e: i for i, e in enumerate(edge_ids)}
    rows = [0] * len(edge_ids)
    for j, f in enumerate(faces):
        for a in f.edges:
            if a in index:
                rows[index[a]] |= 1 << j
    return BitMatrix(len(edge_ids), len(faces), tuple(rows))


def _as_edge_list(edges) -> list[tuple[str, Observable]]:
    if isinstance(edges, Mapping):
        return list(edges.items())
    out = []
    for item in edges:
        if isinstance(item, EdgeClass):
            out.append((item.id, item.representative))
        else:
            out.append(tuple(item))
    return out


def face_beta(face_id: str, reps: Sequence[Observable]) -> int:
    """Sign exponent of the product of pairwise commuting representatives."""
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if not commutes(reps[i], reps[j]):
                raise NonCommutingFace(f"face {face_id}: edges {i} and {j} do not commute")
    sign = product(reps).scalar_sign()
    if sign is None:
        raise NonScalarFace(f"face {face_id}: product of its edges is not ±I")
    return sign


def build(
    edges,
    e0: Sequence[str] = (),
    *,
    faces: Sequence[tuple[str, Sequence[str]]],
    state: StateVector | None = None,
    mu: Mapping[str, int] | None = None,
    volumes: Sequence[tuple[str, Sequence[str]]] = (),
) -> ChainComplex:
    """Validate edges and faces and compute ``beta`` (and ``mu`` from ``state``).

    ``mu`` may be given for some or all ``E0`` edges; any ``E0`` edge not
    covered is evaluated against ``state`` with :func:`eigensign`.  When both
    are present for the same edge they must agree.
    """
    edge_list = _as_edge_list(edges)
    seen: set[str] = set()
    first = None
    for eid, op in edge_list:
        if eid in seen:
            raise DuplicateEdge(f"edge {eid!r} declared twice")
        seen.add(eid)
        if first is None:
            first = op
        elif type(op) is not type(first) or op.dim != first.dim:
            raise BackendMismatch(f"edge {eid!r} does not share the scenario's backend and dimension")
        if not op.is_observable():
            raise NotAnObservable(f"edge {eid!r} is not a ±1-valued observable")
    reps = dict(edge_list)

    e0_set = frozenset(e0)
    unknown = e0_set - seen
    if unknown:
        raise UnknownEdge(f"E0 references undeclared edges {sorted(unknown)}")
    mu_out: dict[str, int] = {}
    given = dict(mu or {})
    for a in e0:
        value = given.pop(a, None)
        if state is not None:
            measured = eigensign(reps[a], state)
            if measured is None:
                raise NotEigenstate(f"state is not an eigenstate of E0 edge {a!r}")
            if value is not None and value != measured:
                raise NotEigenstate(f"E0 edge {a!r}: declared mu={value}, state gives {measured}")
            value = measured
        if value is None:
            raise ValidationError(f"E0 edge {a!r} has no mu and no state to compute it from")
        mu_out[a] = value & 1
    if given:
        raise UnknownEdge(f"mu given for non-E0 edges {sorted(given)}")

    face_objs = []
    face_order = {}
    face_seen: set[str] = set()
    for fid, members in faces:
        if fid in face_seen:
            raise ValidationError(f"face {fid!r} declared twice")
        face_seen.add(fid)
        members = tuple(members)
        missing = [a for a in members if a not in reps]
        if missing:
            raise UnknownEdge(f"face {fid!r} references undeclared edges {missing}")
        if len(set(members)) != len(members):
            raise ValidationError(f"face {fid!r} lists an edge twice")
        beta = face_beta(fid, [reps[a] for a in members])
        face_objs.append(Face(fid, frozenset(members), beta))
        face_order[fid] = members

    vols = []
    for vid, vfaces in volumes:
        missing = [f for f in vfaces if f not in face_seen]
        if missing:
            raise InvalidVolume(f"volume {vid!r} references undeclared faces {missing}")
        vols.append((vid, frozenset(vfaces)))

    cx = ChainComplex(
        edges=tuple(EdgeClass(eid, op) for eid, op in edge_list),
        e0=e0_set,
        mu=mu_out,
        faces=tuple(face_objs),
        volumes=tuple(vols),
        state=state,
        face_order=face_order,
    )
    if vols:
        d_vol = cx.volume_matrix()
        if not (cx.boundary_matrix() @ d_vol).is_zero():
            raise InvalidVolume("some volume has nonzero boundary")
    return cx


@dataclass(frozen=True, eq=False)
class RelativeComplex:
    """C(E, E0): surviving edges and faces, relative boundary and ``beta_psi``."""

    parent: ChainComplex
    edges: tuple[EdgeClass, ...]
    faces: tuple[Face, ...]
    boundary: BitMatrix
    beta: BitVector
    beta_psi: BitVector
    volumes: tuple[tuple[str, frozenset[str]], ...] = ()

    @property
    def edge_ids(self) -> list[str]:
        return [e.id for e in self.edges]

    @property
    def face_ids(self) -> list[str]:
        return [f.id for f in self.faces]

    @property
    def e0(self) -> frozenset[str]:
        return self.parent.e0

    def face_index(self, face_id: str) -> int:
        for i, f in enumerate(self.faces):
            if f.id == face_id:
                return i
        raise KeyError(face_id)

    def relative_edges(self, face_id: str) -> frozenset[str]:
        """Surviving boundary edges of a face."""
        return self.faces[self.face_index(face_id)].edges - self.parent.e0

    def beta_psi_of(self, face_id: str) -> int:
        return self.beta_psi[self.face_index(face_id)]

    def coboundary(self) -> BitMatrix:
        return self.boundary.transpose()

    def volume_matrix(self) -> BitMatrix:
        index = {f.id: i for i, f in enumerate(self.faces)}
        cols = [[0] * len(self.volumes) for _ in self.faces]
        for j, (_, faces) in enumerate(self.volumes):
            for fid in faces:
                cols[index[fid]][j] = 1
        return BitMatrix.from_lists(cols, len(self.volumes))

    def surface(self) -> BitVector:
        """The 2-chain summing every face."""
        return BitVector(len(self.faces), (1 << len(self.faces)) - 1)

    def boundary_of(self, chain: BitVector) -> BitVector:
        return self.boundary @ chain

    def evaluate(self, chain: BitVector) -> int:
        return self.beta_psi.dot(chain)


def contract(cx: ChainComplex) -> RelativeComplex:
    """Contract the ``E0`` edges of ``cx``.

    Faces whose boundary lies inside ``E0`` are dropped; the rest keep their
    ids and order.  ``beta_psi(f) = beta(f) + sum of mu over f's E0 edges``.
    """
    e0 = cx.e0
    edges = tuple(e for e in cx.edges if e.id not in e0)
    mu = cx.mu_full()
    kept = []
    beta = []
    beta_psi = []
    for f in cx.faces:
        if f.edges <= e0:
            continue
        kept.append(f)
        beta.append(f.beta)
        beta_psi.append((f.beta + sum(mu[a] for a in f.edges)) & 1)
    kept_ids = {f.id for f in kept}
    volumes = tuple((vid, frozenset(fs & kept_ids)) for vid, fs in cx.volumes)
    return RelativeComplex(
        parent=cx,
        edges=edges,
        faces=tuple(kept),
        boundary=_incidence([e.id for e in edges], kept),
        beta=BitVector.from_list(beta),
        beta_psi=BitVector.from_list(beta_psi),
        volumes=volumes,
    )


def boundary_matrix(rc: RelativeComplex) -> BitMatrix:
    """Relative boundary (surviving edges x faces)."""
    return rc.boundary


def coboundary_matrix(rc: RelativeComplex) -> BitMatrix:
    return rc.boundary.transpose()


def with_representatives(cx: ChainComplex, reps: Mapping[str, Observable]) -> ChainComplex:
    """Rebuild ``cx`` with some representatives replaced, recomputing every ``beta``."""
    edges = [(e.id, reps.get(e.id, e.representative)) for e in cx.edges]
    has_state = cx.state is not None
    return build(
        edges,
        [e.id for e in cx.edges if e.id in cx.e0],
        faces=[(f.id, cx.face_order.get(f.id, tuple(sorted(f.edges)))) for f in cx.faces],
        state=cx.state,
        mu=None if has_state else {a: cx.mu[a] for a in cx.e0},
        volumes=[(vid, sorted(fs)) for vid, fs in cx.volumes],
    )
