from __future__ import annotations

import math
import random
from itertools import product

import numpy as np
import pytest

from mbqc_cohomology.errors import BackendMismatch, DimensionMismatch, ParseError, ValidationError
from mbqc_cohomology.operators import (
    DenseOperator,
    PhasedPauli,
    StateVector,
    commutes,
    dump_dense,
    eigensign,
    embed,
    load_dense,
    multiply,
    product as op_product,
    rotated_xy,
    xy_rotation,
)

SINGLE = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]]),
}


def reference(word: str) -> np.ndarray:
    """Kronecker product with site 0 leftmost, built independently of the package."""
    sign = -1 if word.startswith("-") else 1
    mat = np.array([[1.0 + 0j]])
    for ch in word.lstrip("+-"):
        mat = np.kron(mat, SINGLE[ch])
    return sign * mat


def test_from_string_and_back():
    for text in ("+XYZ", "-YY", "+I", "-ZIX"):
        assert PhasedPauli.from_string(text).to_string() == text
    assert PhasedPauli.from_string("XY").to_string() == "+XY"
    with pytest.raises(ParseError):
        PhasedPauli.from_string("XQ")
    with pytest.raises(ParseError):
        PhasedPauli.from_string("-")


def test_single_qubit_algebra():
    X, Y, Z = (PhasedPauli.from_string(c) for c in "XYZ")
    # XY = iZ, so XYZ = i I: not an observable
    xyz = X @ Y @ Z
    assert not xyz.is_observable()
    assert str(xyz) == "+iI"
    assert (X @ X).scalar_sign() == 0
    assert not X.commutes(Z)
    assert X.commutes(X)


def test_mermin_products():
    words = ["XXX", "XYY", "YXY", "YYX"]
    ops = [PhasedPauli.from_string(w) for w in words]
    assert op_product(ops).scalar_sign() == 1
    assert op_product([PhasedPauli.from_string(w) for w in ["XII", "IXI", "IIX", "XXX"]]).scalar_sign() == 0


def test_pauli_matches_dense_sampled():
    rng = random.Random(7)
    for _ in range(1000):
        n = rng.randint(1, 4)
        w1 = rng.choice("+-") + "".join(rng.choice("IXYZ") for _ in range(n))
        w2 = rng.choice("+-") + "".join(rng.choice("IXYZ") for _ in range(n))
        a, b = PhasedPauli.from_string(w1), PhasedPauli.from_string(w2)
        ra, rb = reference(w1), reference(w2)
        assert np.allclose(a.to_dense().matrix, ra)
        assert np.allclose((a @ b).to_dense().matrix, ra @ rb)
        assert a.commutes(b) == np.allclose(ra @ rb, rb @ ra)
        da, db = a.to_dense(), b.to_dense()
        assert da.commutes(db) == a.commutes(b)
        assert (da @ db).scalar_sign() == (a @ b).scalar_sign()
        amp = np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(1 << n)])
        assert np.allclose(a.apply(amp), ra @ amp)


def test_all_words_up_to_two_qubits():
    for n in (1, 2):
        for chars in product("IXYZ", repeat=n):
            word = "".join(chars)
            op = PhasedPauli.from_string(word)
            assert op.is_observable()
            assert np.allclose(op.to_dense().matrix, reference(word))
            assert op.to_dense().is_observable()


def test_backend_mismatch():
    with pytest.raises(BackendMismatch):
        multiply(PhasedPauli.from_string("X"), PhasedPauli.from_string("X").to_dense())
    with pytest.raises(DimensionMismatch):
        commutes(PhasedPauli.from_string("X").to_dense(), PhasedPauli.from_string("XX").to_dense())


def test_dense_validation():
    with pytest.raises(DimensionMismatch):
        DenseOperator(np.eye(3))
    with pytest.raises(DimensionMismatch):
        DenseOperator(np.eye(4), max_dim=2)
    assert not DenseOperator(np.diag([1, 2])).is_observable()


def test_eigensign():
    ghz = StateVector([1 / math.sqrt(2), 0, 0, 0, 0, 0, 0, 1 / math.sqrt(2)])
    assert eigensign(PhasedPauli.from_string("XXX"), ghz) == 0
    assert eigensign(PhasedPauli.from_string("XYY"), ghz) == 1
    assert eigensign(PhasedPauli.from_string("XII"), ghz) is None
    assert eigensign(PhasedPauli.from_string("YYX").to_dense(), ghz) == 1


def test_state_normalization():
    with pytest.raises(ValidationError):
        StateVector([1, 1])
    s = StateVector([1, 1], normalize=True)
    assert np.isclose(abs(s.overlap(StateVector.basis(1, 0))), 1 / math.sqrt(2))


def test_rotated_xy():
    X = PhasedPauli.from_string("X").to_dense()
    Y = PhasedPauli.from_string("Y").to_dense()
    assert rotated_xy(0, 4) == X
    assert rotated_xy(2, 4) == Y
    assert rotated_xy(4, 4) == -X
    assert rotated_xy(9, 4) == rotated_xy(1, 4)
    assert rotated_xy(1, 4).is_observable()
    assert xy_rotation(1, 3).is_observable()
    with pytest.raises(ValueError):
        rotated_xy(1, 3)


def test_embed_site_order():
    X = PhasedPauli.from_string("X")
    assert embed(X, 0, 3) == PhasedPauli.from_string("XII").to_dense()
    assert embed(X.to_dense(), 2, 3) == PhasedPauli.from_string("IIX").to_dense()


def test_dense_text_round_trip():
    op = rotated_xy(1, 6).kron(PhasedPauli.from_string("Z").to_dense())
    again = load_dense(dump_dense(op))
    assert np.array_equal(again.matrix, op.matrix)
    with pytest.raises(ParseError):
        load_dense("2 1 0")
    with pytest.raises(ParseError):
        load_dense("")
