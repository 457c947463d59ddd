from __future__ import annotations

import math
import random
from itertools import product

import numpy as np
import pytest

from mbqc_cohomology.boolean import OR2, input_bits
from mbqc_cohomology.errors import CyclicTemporalOrder, DimensionMismatch, NotAnObservable, ValidationError
from mbqc_cohomology.gf2 import BitMatrix
from mbqc_cohomology.library import ghz_mbqc_spec
from mbqc_cohomology.mbqc import (
    DeterministicTable,
    Distribution,
    MbqcSpec,
    branch_weights,
    evaluate,
    measurement_order,
    run,
    sample_counts,
    success_probability,
)
from mbqc_cohomology.operators import DenseOperator, PhasedPauli, StateVector


def full_projector_oracle(spec: MbqcSpec, inp) -> dict:
    """p(o) from the joint projector of every outcome string, no sequential collapse."""
    n = spec.n_sites
    out: dict = {}
    for s in product((0, 1), repeat=n):
        q = [(sum(spec.T[i, j] & s[j] for j in range(n)) + sum(spec.S[i, j] & inp[j] for j in range(spec.m))) & 1 for i in range(n)]
        proj = np.array([[1.0 + 0j]])
        for i in range(n):
            mat = spec.obs[i][q[i]].to_dense().matrix
            proj = np.kron(proj, (np.eye(2) + (-1) ** s[i] * mat) / 2)
        vec = proj @ spec.state.amplitudes
        o = tuple(sum(spec.Z[r, j] & s[j] for j in range(n)) & 1 for r in range(spec.k))
        out[o] = out.get(o, 0.0) + float(np.vdot(vec, vec).real)
    return out


def random_observable(rng: random.Random) -> DenseOperator:
    theta, phi = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
    X, Y, Z = (PhasedPauli.from_string(c).to_dense().matrix for c in "XYZ")
    return DenseOperator(math.sin(theta) * (math.cos(phi) * X + math.sin(phi) * Y) + math.cos(theta) * Z)


def random_spec(rng: random.Random) -> MbqcSpec:
    n, m = rng.randint(1, 4), rng.randint(1, 2)
    perm = list(range(n))
    rng.shuffle(perm)
    T = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a):
            T[perm[a]][perm[b]] = rng.randint(0, 1)
    amp = np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(1 << n)])
    return MbqcSpec(
        n, m, 1,
        StateVector(amp, normalize=True),
        tuple((random_observable(rng), random_observable(rng)) for _ in range(n)),
        BitMatrix.from_lists([[rng.randint(0, 1) for _ in range(n)]]),
        BitMatrix.from_lists(T, n),
        BitMatrix.from_lists([[rng.randint(0, 1) for _ in range(m)] for _ in range(n)], m),
    )


def test_ghz_computes_or():
    spec = ghz_mbqc_spec()
    result = evaluate(spec)
    assert isinstance(result, DeterministicTable)
    assert result.functions == (OR2,)
    for w in result.weights:
        assert len(w) == 1 and abs(next(iter(w.values())) - 1) < 1e-9
    assert success_probability(spec, OR2) == pytest.approx(1.0, abs=1e-9)


def test_branch_weights_match_joint_projector_oracle():
    rng = random.Random(11)
    for _ in range(40):
        spec = random_spec(rng)
        for i in range(1 << spec.m):
            inp = input_bits(i, spec.m)
            got = branch_weights(spec, inp)
            want = full_projector_oracle(spec, inp)
            assert abs(sum(got.values()) - 1) < 1e-9
            for o in set(got) | set(want):
                assert abs(got.get(o, 0) - want.get(o, 0)) < 1e-9


def test_measurement_order():
    T = BitMatrix.from_lists([[0, 0, 1], [0, 0, 0], [0, 1, 0]])
    assert measurement_order(T) == [1, 2, 0]
    assert measurement_order(BitMatrix.zeros(3, 3)) == [0, 1, 2]
    with pytest.raises(CyclicTemporalOrder):
        measurement_order(BitMatrix.from_lists([[0, 1], [1, 0]]))
    with pytest.raises(CyclicTemporalOrder):
        measurement_order(BitMatrix.from_lists([[1]]))


def test_adaptive_teleportation_style_correction():
    # Bell pair; site 2 measures Z if site 1 saw +1 and -Z otherwise, output s1 + s2
    amp = [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)]
    Z = PhasedPauli.from_string("Z")
    X = PhasedPauli.from_string("X")
    spec = MbqcSpec(2, 1, 1, StateVector(amp), ((Z, X), (Z, -Z)),
                    BitMatrix.from_lists([[0, 1]]), BitMatrix.from_lists([[0, 0], [1, 0]]), BitMatrix.from_lists([[0], [0]]))
    # s2 always equals 0: outcome s1 on site 1 is mirrored and then undone by the sign flip
    result = evaluate(spec)
    assert isinstance(result, DeterministicTable)
    assert result.functions[0].table == (0, 0)


def test_nondeterministic_is_distribution():
    spec = MbqcSpec(1, 1, 1, StateVector([1, 0]), ((PhasedPauli.from_string("X"), PhasedPauli.from_string("Z")),),
                    BitMatrix.from_lists([[1]]), BitMatrix.zeros(1, 1), BitMatrix.from_lists([[1]]))
    result = evaluate(spec)
    assert isinstance(result, Distribution)
    assert result.weights[0][(0,)] == pytest.approx(0.5)
    assert result.weights[1] == {(0,): pytest.approx(1.0)}


def test_run_is_reproducible():
    spec = ghz_mbqc_spec()
    a = run(spec, (0, 1), seed=7)
    b = run(spec, (0, 1), seed=7)
    assert a == b
    assert a.o == (1,)
    assert a.q == (0, 1, 1)
    assert a.probability == pytest.approx(0.25)


def test_sampling_within_five_sigma():
    # a single |0> measured in a tilted basis: p(0) = cos^2(theta/2)
    theta = 1.1
    X, Z = PhasedPauli.from_string("X").to_dense().matrix, PhasedPauli.from_string("Z").to_dense().matrix
    obs = DenseOperator(math.sin(theta) * X + math.cos(theta) * Z)
    spec = MbqcSpec(1, 1, 1, StateVector([1, 0]), ((obs, obs),), BitMatrix.from_lists([[1]]), BitMatrix.zeros(1, 1), BitMatrix.from_lists([[0]]))
    runs = 10_000
    counts = sample_counts(spec, (0,), runs, seed=5)
    p = math.cos(theta / 2) ** 2
    sigma = math.sqrt(runs * p * (1 - p))
    assert abs(counts.get((0,), 0) - runs * p) < 5 * sigma


def test_spec_validation():
    X = PhasedPauli.from_string("X")
    good = dict(n_sites=1, m=1, k=1, state=StateVector([1, 0]), obs=((X, X),),
                Z=BitMatrix.from_lists([[1]]), T=BitMatrix.zeros(1, 1), S=BitMatrix.from_lists([[1]]))
    MbqcSpec(**good)
    with pytest.raises(DimensionMismatch):
        MbqcSpec(**{**good, "state": StateVector([1, 0, 0, 0])})
    with pytest.raises(ValidationError):
        MbqcSpec(**{**good, "S": BitMatrix.from_lists([[1, 0]])})
    with pytest.raises(NotAnObservable):
        MbqcSpec(**{**good, "obs": ((X, DenseOperator([[1, 0], [0, 0]])),)})
    with pytest.raises(ValidationError):
        run(MbqcSpec(**good), (0, 1))
