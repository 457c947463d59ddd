from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest
from scipy.optimize import linprog

from mbqc_cohomology.boolean import AND2, OR2, linear
from mbqc_cohomology.errors import GuardExceeded, NonCommutingFace, ValidationError
from mbqc_cohomology.fraction import (
    EmpiricalModel,
    best_nchvm_success,
    cf,
    from_assignment,
    mixture,
    model_from_quantum,
    ncf,
    ncf_solve,
    rationalize,
)
from mbqc_cohomology.library import GHZ_CONTEXTS, ghz_model
from mbqc_cohomology.operators import PhasedPauli, StateVector


def full_lp(model: EmpiricalModel):
    """The unreduced LP: one column per global assignment, one row per (context, outcome)."""
    index = {a: i for i, a in enumerate(model.edges)}
    rows, caps = [], []
    for cid, members in model.contexts:
        for outcome in product((0, 1), repeat=len(members)):
            rows.append((cid, [index[a] for a in members], outcome))
            caps.append(model.probability(cid, outcome))
    cols = list(product((0, 1), repeat=len(model.edges)))
    A = [[int(tuple(g[p] for p in pos) == o) for g in cols] for _, pos, o in rows]
    return A, caps, cols


def scipy_ncf(model: EmpiricalModel) -> float:
    A, caps, cols = full_lp(model)
    res = linprog(-np.ones(len(cols)), A_ub=A, b_ub=[float(c) for c in caps], bounds=[(0, None)] * len(cols), method="highs")
    assert res.status == 0
    return -res.fun


def vertex_enumeration_ncf(model: EmpiricalModel, max_vars: int = 4) -> Fraction | None:
    """Exact optimum by trying every basis of tight constraints.

    Columns meeting a zero-probability row are fixed at zero first.  Returns
    None when more than ``max_vars`` columns survive, since the enumeration
    grows combinatorially.
    """
    A, caps, cols = full_lp(model)
    live = [j for j in range(len(cols)) if all(caps[i] > 0 for i in range(len(A)) if A[i][j])]
    n = len(live)
    if n == 0:
        return Fraction(0)
    if n > max_vars:
        return None
    cons = [([Fraction(A[i][j]) for j in live], Fraction(caps[i])) for i in range(len(A)) if any(A[i][j] for j in live)]
    cons += [([Fraction(-int(k == j)) for k in range(n)], Fraction(0)) for j in range(n)]
    best = None
    for subset in combinations(range(len(cons)), n):
        M = [list(cons[i][0]) + [cons[i][1]] for i in subset]
        # exact Gauss-Jordan elimination
        ok = True
        for col in range(n):
            piv = next((r for r in range(col, n) if M[r][col] != 0), None)
            if piv is None:
                ok = False
                break
            M[col], M[piv] = M[piv], M[col]
            M[col] = [v / M[col][col] for v in M[col]]
            for r in range(n):
                if r != col and M[r][col]:
                    M[r] = [a - M[r][col] * b for a, b in zip(M[r], M[col])]
        if not ok:
            continue
        x = [M[r][n] for r in range(n)]
        if all(sum(a * v for a, v in zip(row, x)) <= cap for row, cap in cons):
            val = sum(x)
            best = val if best is None else max(best, val)
    return best


def deterministic_partner():
    g = ghz_model()
    return from_assignment(g.edges, g.contexts, {**{a: 0 for a in g.edges}, "Y1": 1})


def test_ghz_model_is_exact():
    g = ghz_model()
    assert not g.approximate
    assert all(p == Fraction(1, 4) for d in g.dist.values() for p in d.values())


def test_ghz_is_strongly_contextual():
    res = ncf_solve(ghz_model())
    assert res.value == 0
    assert res.certified
    assert cf(ghz_model()) == 1
    assert scipy_ncf(ghz_model()) == pytest.approx(0, abs=1e-9)


def test_half_mixture():
    mix = mixture([ghz_model(), deterministic_partner()], [Fraction(1, 2), Fraction(1, 2)])
    res = ncf_solve(mix)
    assert res.value == Fraction(1, 2)
    assert res.certified
    assert vertex_enumeration_ncf(mix) == Fraction(1, 2)
    assert scipy_ncf(mix) == pytest.approx(0.5, abs=1e-9)


def test_ncf_agrees_with_oracles_on_mixtures():
    g = ghz_model()
    for bits in [(0,) * 6, (1, 0, 0, 0, 0, 0), (0, 1, 1, 0, 1, 0)]:
        det = from_assignment(g.edges, g.contexts, dict(zip(g.edges, bits)))
        for w in (Fraction(1, 4), Fraction(1, 2), Fraction(2, 3)):
            mix = mixture([g, det], [w, 1 - w])
            value = ncf(mix)
            exact = vertex_enumeration_ncf(mix)
            assert exact is None or value == exact
            assert float(value) == pytest.approx(scipy_ncf(mix), abs=1e-9)
            # concavity: mixing in a non-contextual model can only add its weight
            assert value >= 1 - w


def test_deterministic_model_is_noncontextual():
    det = deterministic_partner()
    assert ncf(det) == 1
    assert cf(det) == 0


def test_model_validation():
    with pytest.raises(ValidationError):
        EmpiricalModel(("a",), (("c", ("a",)),), {"c": {(0,): Fraction(1, 2)}})
    with pytest.raises(ValidationError):
        EmpiricalModel(("a",), (("c", ("b",)),), {"c": {(0,): Fraction(1)}})
    with pytest.raises(ValidationError):
        mixture([ghz_model(), deterministic_partner()], [Fraction(1, 2), Fraction(1, 3)])


def test_model_from_quantum_rejects_noncommuting():
    X, Z = PhasedPauli.from_string("X"), PhasedPauli.from_string("Z")
    with pytest.raises(NonCommutingFace):
        model_from_quantum(StateVector([1, 0]), {"x": X, "z": Z}, [("c", ("x", "z"))])


def test_model_from_quantum_flags_irrational():
    import math

    # p(0) = 1/2 + 1e-8 has no fraction with denominator <= 2^20 within 1e-9
    p0 = 0.5 + 1e-8
    state = StateVector([math.sqrt(p0), math.sqrt(1 - p0)])
    model = model_from_quantum(state, {"z": PhasedPauli.from_string("Z")}, [("c", ("z",))])
    assert model.approximate
    assert sum(model.dist["c"].values()) == 1


def test_rationalize():
    assert rationalize(0.25) == (Fraction(1, 4), True)
    frac, ok = rationalize(2 ** -0.5)
    assert ok and frac.denominator <= 2**20
    frac, ok = rationalize(0.5 + 1e-8)
    assert not ok and frac == Fraction(1, 2)


def test_best_nchvm_success_for_or():
    edges = ("X1", "X2", "X3", "Y1", "Y2", "Y3")
    by_input = [ctx for _, ctx in GHZ_CONTEXTS]
    # context order follows input index: (0,0), (1,0), (0,1), (1,1)
    by_input = [by_input[0], by_input[2], by_input[1], by_input[3]]
    assert best_nchvm_success(edges, by_input, OR2) == Fraction(3, 4)
    assert best_nchvm_success(edges, by_input, AND2) == Fraction(3, 4)
    assert best_nchvm_success(edges, by_input, OR2.complement()) == Fraction(3, 4)
    for mask in range(4):
        assert best_nchvm_success(edges, by_input, linear(mask, 2)) == 1
    with pytest.raises(ValidationError):
        best_nchvm_success(edges, by_input[:3], OR2)


def test_guard():
    edges = tuple(f"e{i}" for i in range(17))
    model = from_assignment(edges, [("c", edges[:1])], {e: 0 for e in edges})
    with pytest.raises(GuardExceeded):
        ncf(model)
