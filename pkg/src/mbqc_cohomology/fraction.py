"""Empirical models, the non-contextual fraction LP, and best non-contextual success.

The non-contextual universe is the set of deterministic global assignments
(one bit per edge).  ``NCF`` is the largest total weight a sub-normalized
mixture of those assignments can carry without exceeding any context
probability; ``CF = 1 - NCF``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Mapping, Sequence

import numpy as np

from .boolean import BooleanFunction
from .errors import GuardExceeded, NonCommutingFace, ValidationError
from .operators import Observable, StateVector, commutes
from .simplex import LPSolution, check_optimality, maximize

ENUMERATION_GUARD = 16
DENOMINATOR_BOUND = 2**20
ROUNDING_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class EmpiricalModel:
    edges: tuple[str, ...]
    contexts: tuple[tuple[str, tuple[str, ...]], ...]
    dist: Mapping[str, Mapping[tuple[int, ...], Fraction]]
    approximate: bool = False

    def __post_init__(self):
        known = set(self.edges)
        ids = set()
        for cid, members in self.contexts:
            if cid in ids:
                raise ValidationError(f"context {cid!r} declared twice")
            ids.add(cid)
            missing = [a for a in members if a not in known]
            if missing:
                raise ValidationError(f"context {cid!r} uses unknown edges {missing}")
            dist = self.dist.get(cid, {})
            for outcome, p in dist.items():
                if len(outcome) != len(members):
                    raise ValidationError(f"context {cid!r}: outcome {outcome} has the wrong length")
                if p < 0:
                    raise ValidationError(f"context {cid!r}: negative probability")
            total = sum(dist.values(), Fraction(0))
            if total != 1:
                raise ValidationError(f"context {cid!r}: probabilities sum to {total}, not 1")

    def context(self, cid: str) -> tuple[str, ...]:
        for c, members in self.contexts:
            if c == cid:
                return members
        raise KeyError(cid)

    def probability(self, cid: str, outcome: Sequence[int]) -> Fraction:
        return self.dist[cid].get(tuple(outcome), Fraction(0))


def from_assignment(edges: Sequence[str], contexts: Sequence[tuple[str, Sequence[str]]], assignment: Mapping[str, int]) -> EmpiricalModel:
    """The model produced with certainty by one global assignment."""
    dist = {}
    for cid, members in contexts:
        dist[cid] = {tuple(assignment[a] & 1 for a in members): Fraction(1)}
    return EmpiricalModel(tuple(edges), tuple((c, tuple(ms)) for c, ms in contexts), dist)


def mixture(models: Sequence[EmpiricalModel], weights: Sequence) -> EmpiricalModel:
    """Convex combination of models sharing edges and contexts."""
    weights = [Fraction(w) for w in weights]
    if sum(weights) != 1 or any(w < 0 for w in weights):
        raise ValidationError("mixture weights must be nonnegative and sum to 1")
    first = models[0]
    for mdl in models[1:]:
        if mdl.edges != first.edges or mdl.contexts != first.contexts:
            raise ValidationError("mixed models must share edges and contexts")
    dist = {}
    for cid, _ in first.contexts:
        acc: dict[tuple[int, ...], Fraction] = {}
        for mdl, w in zip(models, weights):
            for o, p in mdl.dist[cid].items():
                acc[o] = acc.get(o, Fraction(0)) + w * p
        dist[cid] = {o: p for o, p in acc.items() if p}
    return EmpiricalModel(first.edges, first.contexts, dist, any(m.approximate for m in models))


def rationalize(p: float) -> tuple[Fraction, bool]:
    """Nearest fraction with denominator at most 2^20, and whether it is within 1e-9."""
    frac = Fraction(p).limit_denominator(DENOMINATOR_BOUND)
    return frac, abs(float(frac) - p) < ROUNDING_TOLERANCE


def model_from_quantum(
    state: StateVector,
    observables: Mapping[str, Observable],
    contexts: Sequence[tuple[str, Sequence[str]]],
) -> EmpiricalModel:
    """Born-rule joint distributions per context, rounded to rationals.

    Per context the probabilities are rationalized and the largest entry is
    adjusted so the distribution sums to exactly one; the model is flagged
    ``approximate`` when any entry moved by 1e-9 or more.
    """
    edges = tuple(observables)
    approximate = False
    dist = {}
    for cid, members in contexts:
        members = tuple(members)
        ops = [observables[a] for a in members]
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                if not commutes(ops[i], ops[j]):
                    raise NonCommutingFace(f"context {cid!r}: {members[i]} and {members[j]} do not commute")
        mats = [op.to_dense().matrix for op in ops]
        eye = np.eye(state.dim)
        raw = {}
        for outcome in iproduct((0, 1), repeat=len(ops)):
            vec = state.amplitudes
            for mat, s in zip(mats, outcome):
                vec = (eye + (-1) ** s * mat) @ vec / 2
            raw[outcome] = float(np.vdot(vec, vec).real)
        probs = {}
        for outcome, p in raw.items():
            frac, ok = rationalize(p)
            approximate |= not ok
            if frac:
                probs[outcome] = frac
        total = sum(probs.values(), Fraction(0))
        if total != 1:
            approximate |= abs(float(total) - 1) >= ROUNDING_TOLERANCE
            top = max(probs, key=lambda o: (probs[o], o))
            probs[top] += 1 - total
        dist[cid] = probs
    return EmpiricalModel(edges, tuple((c, tuple(ms)) for c, ms in contexts), dist, approximate)


@dataclass(frozen=True)
class NcfResult:
    value: Fraction
    weights: dict[tuple[int, ...], Fraction]
    lp: LPSolution
    certified: bool


def _assignment_rows(model: EmpiricalModel):
    if len(model.edges) > ENUMERATION_GUARD:
        raise GuardExceeded(f"{len(model.edges)} edges exceed the assignment guard {ENUMERATION_GUARD}")
    index = {a: i for i, a in enumerate(model.edges)}
    rows = []  # (context id, outcome, cap)
    for cid, members in model.contexts:
        for outcome in iproduct((0, 1), repeat=len(members)):
            rows.append((cid, outcome, model.probability(cid, outcome)))
    return index, rows


def ncf_solve(model: EmpiricalModel) -> NcfResult:
    """Solve the NCF linear program exactly.

    Assignments appearing under any zero-probability outcome are fixed to
    zero before the simplex runs; this only removes forced variables.
    """
    index, rows = _assignment_rows(model)
    ctx_pos = {cid: [index[a] for a in members] for cid, members in model.contexts}
    row_of = {(cid, o): r for r, (cid, o, _) in enumerate(rows)}
    caps = [cap for _, _, cap in rows]
    live = []
    live_rows = []
    for g in iproduct((0, 1), repeat=len(model.edges)):
        touched = [row_of[(cid, tuple(g[p] for p in pos))] for cid, pos in ctx_pos.items()]
        if all(caps[r] > 0 for r in touched):
            live.append(g)
            live_rows.append(touched)
    used = sorted({r for touched in live_rows for r in touched})
    pos_of = {r: i for i, r in enumerate(used)}
    A = [[0] * len(live) for _ in used]
    for j, touched in enumerate(live_rows):
        for r in touched:
            A[pos_of[r]][j] = 1
    b = [caps[r] for r in used]
    c = [1] * len(live)
    sol = maximize(c, A, b)
    weights = {g: w for g, w in zip(live, sol.x) if w}
    certified = check_optimality(c, A, b, sol) and _full_feasible(model, weights, ctx_pos)
    return NcfResult(sol.value, weights, sol, certified)


def _full_feasible(model, weights, ctx_pos) -> bool:
    for cid, pos in ctx_pos.items():
        load: dict[tuple[int, ...], Fraction] = {}
        for g, w in weights.items():
            o = tuple(g[p] for p in pos)
            load[o] = load.get(o, Fraction(0)) + w
        if any(w > model.probability(cid, o) for o, w in load.items()):
            return False
    return True


def ncf(model: EmpiricalModel) -> Fraction:
    return ncf_solve(model).value


def cf(model: EmpiricalModel) -> Fraction:
    return 1 - ncf(model)


def best_nchvm_success(
    edges: Sequence[str],
    contexts_by_input: Sequence[Sequence[str]],
    target: BooleanFunction,
) -> Fraction:
    """Best input-averaged success of a global assignment whose output is the context parity."""
    if len(contexts_by_input) != 1 << target.m:
        raise ValidationError(f"{len(contexts_by_input)} contexts for a target of arity {target.m}")
    if len(edges) > ENUMERATION_GUARD:
        raise GuardExceeded(f"{len(edges)} edges exceed the assignment guard {ENUMERATION_GUARD}")
    index = {a: i for i, a in enumerate(edges)}
    masks = [sum(1 << index[a] for a in ctx) for ctx in contexts_by_input]
    best = 0
    for g in range(1 << len(edges)):
        hits = sum(((g & mk).bit_count() & 1) == t for mk, t in zip(masks, target.table))
        best = max(best, hits)
    return Fraction(best, len(masks))
