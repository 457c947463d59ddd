"""Simulation of l2-MBQC: adaptive single-site measurements with mod-2 linear side processing.

Sites are 0-indexed.  At site ``i`` the observable ``obs[i][q_i]`` is
measured with ``q = T s + S input`` and the output is ``o = Z s``; an outcome
``s_i = 0`` means eigenvalue ``+1``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .boolean import BooleanFunction, input_bits
from .errors import CyclicTemporalOrder, DimensionMismatch, GuardExceeded, NotAnObservable, ValidationError
from .gf2 import BitMatrix
from .operators import TAU_NUM, Observable, StateVector

# branches lighter than this carry no probability and are dropped
_ZERO_WEIGHT = 1e-15


@dataclass(frozen=True, eq=False)
class MbqcSpec:
    n_sites: int
    m: int
    k: int
    state: StateVector
    obs: tuple[tuple[Observable, Observable], ...]
    Z: BitMatrix
    T: BitMatrix
    S: BitMatrix
    order: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = self.n_sites
        if self.state.dim != 1 << n:
            raise DimensionMismatch(f"state has dim {self.state.dim}, expected 2^{n}")
        if len(self.obs) != n:
            raise ValidationError(f"{len(self.obs)} observable pairs for {n} sites")
        for i, pair in enumerate(self.obs):
            if len(pair) != 2:
                raise ValidationError(f"site {i} needs exactly two observables")
            for q, op in enumerate(pair):
                if op.dim != 2:
                    raise DimensionMismatch(f"observable ({i}, {q}) is not single-site")
                if not op.is_observable():
                    raise NotAnObservable(f"observable ({i}, {q}) does not have ±1 eigenvalues")
        for name, mat, shape in (("Z", self.Z, (self.k, n)), ("T", self.T, (n, n)), ("S", self.S, (n, self.m))):
            if mat.shape != shape:
                raise ValidationError(f"matrix {name} has shape {mat.shape}, expected {shape}")
        object.__setattr__(self, "order", tuple(measurement_order(self.T)))

    def projector_matrices(self) -> list[list[list[np.ndarray]]]:
        """``P[i][q][s] = (I + (-1)^s O_i[q]) / 2`` as 2x2 arrays."""
        out = []
        for pair in self.obs:
            per_q = []
            for op in pair:
                mat = op.to_dense().matrix
                per_q.append([(np.eye(2) + mat) / 2, (np.eye(2) - mat) / 2])
            out.append(per_q)
        return out


@dataclass(frozen=True)
class RunRecord:
    input: tuple[int, ...]
    q: tuple[int, ...]
    s: tuple[int, ...]
    o: tuple[int, ...]
    probability: float
    seed: int | None


def measurement_order(T: BitMatrix) -> list[int]:
    """Topological order of sites (``j`` before ``i`` when ``T[i][j] = 1``), smallest index first."""
    n = T.nrows
    if T.ncols != n:
        raise ValidationError("T must be square")
    indeg = [0] * n
    dependents: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if T[i, j]:
                indeg[i] += 1
                dependents[j].append(i)
    ready = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        j = heapq.heappop(ready)
        order.append(j)
        for i in dependents[j]:
            indeg[i] -= 1
            if indeg[i] == 0:
                heapq.heappush(ready, i)
    if len(order) != n:
        stuck = sorted(set(range(n)) - set(order))
        raise CyclicTemporalOrder(f"measurement dependencies are cyclic among sites {stuck}")
    return order


def _apply_site(psi: np.ndarray, mat: np.ndarray, site: int, n: int) -> np.ndarray:
    t = psi.reshape((2,) * n)
    t = np.tensordot(mat, t, axes=([1], [site]))
    return np.moveaxis(t, 0, site).reshape(-1)


def _basis_choice(spec: MbqcSpec, site: int, s: Sequence[int], inp: Sequence[int]) -> int:
    q = 0
    for j in range(spec.n_sites):
        if spec.T[site, j]:
            q ^= s[j]
    for j in range(spec.m):
        if spec.S[site, j]:
            q ^= inp[j]
    return q


def _output(spec: MbqcSpec, s: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(spec.Z[r, j] & s[j] for j in range(spec.n_sites)) & 1 for r in range(spec.k))


def _check_input(spec: MbqcSpec, inp) -> tuple[int, ...]:
    if isinstance(inp, int):
        return input_bits(inp, spec.m)
    inp = tuple(int(b) & 1 for b in inp)
    if len(inp) != spec.m:
        raise ValidationError(f"input has {len(inp)} bits, spec expects {spec.m}")
    return inp


def run(spec: MbqcSpec, inp, seed: int | None = None, rng: np.random.Generator | None = None) -> RunRecord:
    """One sampled run, measuring sites in :func:`measurement_order`."""
    inp = _check_input(spec, inp)
    if rng is None:
        rng = np.random.default_rng(seed)
    n = spec.n_sites
    proj = spec.projector_matrices()
    psi = spec.state.amplitudes.copy()
    s = [0] * n
    q = [0] * n
    prob = 1.0
    for site in spec.order:
        qi = _basis_choice(spec, site, s, inp)
        q[site] = qi
        branch0 = _apply_site(psi, proj[site][qi][0], site, n)
        p0 = float(np.vdot(branch0, branch0).real)
        p0 = min(max(p0, 0.0), 1.0)
        if rng.random() < p0:
            outcome, branch, p = 0, branch0, p0
        else:
            outcome = 1
            branch = _apply_site(psi, proj[site][qi][1], site, n)
            p = 1.0 - p0
        s[site] = outcome
        prob *= p
        psi = branch / math.sqrt(p)
    return RunRecord(inp, tuple(q), tuple(s), _output(spec, s), prob, seed)


def branch_weights(spec: MbqcSpec, inp, guard: int = 20) -> dict[tuple[int, ...], float]:
    """Exact distribution of ``o`` for one input by enumerating outcome branches."""
    if spec.n_sites > guard:
        raise GuardExceeded(f"{spec.n_sites} sites exceed the branch depth guard {guard}")
    inp = _check_input(spec, inp)
    n = spec.n_sites
    proj = spec.projector_matrices()
    weights: dict[tuple[int, ...], float] = {}

    def descend(depth: int, psi: np.ndarray, s: list[int]):
        if depth == n:
            o = _output(spec, s)
            weights[o] = weights.get(o, 0.0) + float(np.vdot(psi, psi).real)
            return
        site = spec.order[depth]
        qi = _basis_choice(spec, site, s, inp)
        for outcome in (0, 1):
            # unnormalized branches: the squared norm is the branch probability
            branch = _apply_site(psi, proj[site][qi][outcome], site, n)
            if float(np.vdot(branch, branch).real) <= _ZERO_WEIGHT:
                continue
            s[site] = outcome
            descend(depth + 1, branch, s)
            s[site] = 0

    descend(0, spec.state.amplitudes.copy(), [0] * n)
    return weights


@dataclass(frozen=True)
class DeterministicTable:
    functions: tuple[BooleanFunction, ...]
    weights: tuple[dict[tuple[int, ...], float], ...]

    deterministic = True


@dataclass(frozen=True)
class Distribution:
    weights: tuple[dict[tuple[int, ...], float], ...]

    deterministic = False


def evaluate(spec: MbqcSpec, guard: int = 20) -> DeterministicTable | Distribution:
    """Exact output statistics for every input; deterministic iff each input has one sure output."""
    weights = tuple(branch_weights(spec, i, guard) for i in range(1 << spec.m))
    outputs = []
    for w in weights:
        sure = [o for o, p in w.items() if abs(p - 1.0) <= TAU_NUM]
        if len(sure) != 1:
            return Distribution(weights)
        outputs.append(sure[0])
    functions = tuple(BooleanFunction(spec.m, tuple(o[r] for o in outputs)) for r in range(spec.k))
    return DeterministicTable(functions, weights)


def success_probability(spec: MbqcSpec, target: BooleanFunction, guard: int = 20) -> float:
    """Input-averaged probability that the single output bit equals ``target``."""
    if spec.k != 1:
        raise ValidationError(f"success probability needs one output bit, spec has {spec.k}")
    if target.m != spec.m:
        raise ValidationError(f"target has arity {target.m}, spec has {spec.m} inputs")
    total = 0.0
    for i in range(1 << spec.m):
        w = branch_weights(spec, i, guard)
        total += w.get((target.table[i],), 0.0)
    return total / (1 << spec.m)


def sample_counts(spec: MbqcSpec, inp, runs: int, seed: int) -> dict[tuple[int, ...], int]:
    """Output histogram of ``runs`` sampled executions sharing one seeded generator."""
    rng = np.random.default_rng(seed)
    counts: dict[tuple[int, ...], int] = {}
    for _ in range(runs):
        rec = run(spec, inp, seed=seed, rng=rng)
        counts[rec.o] = counts.get(rec.o, 0) + 1
    return counts

