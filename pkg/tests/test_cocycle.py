from __future__ import annotations

import pytest

from mbqc_cohomology.boolean import AND2, OR2, BooleanFunction, distance_to_linear
from mbqc_cohomology.cocycle import (
    InputGroup,
    act_edge,
    act_face,
    class_representative,
    face_images,
    gauge_apply,
    gauge_from_bits,
    output_class,
    output_function,
)
from mbqc_cohomology.errors import GaugeError, ImageNotAFace, UnpairedEdge, ValidationError
from mbqc_cohomology.gf2 import BitMatrix
from mbqc_cohomology.library import ghz_input_group, mermin_star_ghz


@pytest.fixture
def ghz():
    return mermin_star_ghz(), ghz_input_group()


def test_edge_action(ghz):
    _, group = ghz
    assert act_edge(group, (1, 0), "X1") == "Y1"
    assert act_edge(group, (1, 0), "X2") == "X2"
    assert act_edge(group, (1, 0), "X3") == "Y3"
    assert act_edge(group, (1, 1), "Y3") == "Y3"
    with pytest.raises(UnpairedEdge):
        act_edge(group, (1, 0), "XXX")


def test_face_images(ghz):
    rc, group = ghz
    assert act_face(rc, group, (1, 0), "f1") == "f3"
    assert act_face(rc, group, (0, 1), "f1") == "f2"
    assert face_images(rc, group, "f1") == ["f1", "f3", "f2", "f4"]


def test_output_function_is_or(ghz):
    rc, group = ghz
    assert output_function(rc, group, "f1") == OR2


def test_gauge_flip_gives_and(ghz):
    rc, group = ghz
    flipped = gauge_apply(rc, {"Y3": 1})
    assert flipped.beta_psi.to_list() == [0, 0, 0, 1]
    assert output_function(flipped, group, "f1") == AND2


def test_gauge_errors(ghz):
    rc, _ = ghz
    with pytest.raises(GaugeError):
        gauge_apply(rc, {"XXX": 1})
    with pytest.raises(GaugeError):
        gauge_apply(rc, {"nope": 1})
    assert gauge_apply(rc, {}) is rc


def test_output_class_matches_explicit_gauges(ghz):
    rc, group = ghz
    cls = output_class(rc, group, "f1")
    odd = {BooleanFunction(2, t) for t in [(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0),
                                          (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 0)]}
    assert cls == odd
    assert all(distance_to_linear(f, affine=True) == 1 for f in cls)
    # the complement within all 16 functions is exactly the affine ones
    rest = {BooleanFunction(2, tuple((i >> k) & 1 for k in range(4))) for i in range(16)} - cls
    assert all(distance_to_linear(f, affine=True) == 0 for f in rest)
    # the enumeration agrees with applying each gauge through the operators
    for g in range(1 << len(rc.edges)):
        gamma = gauge_from_bits(rc, [(g >> i) & 1 for i in range(len(rc.edges))])
        assert output_function(gauge_apply(rc, gamma), group, "f1") in cls
    assert class_representative(cls).table == (0, 0, 0, 1)


def test_image_not_a_face(ghz):
    rc, _ = ghz
    # flipping only the first site sends f1 to {Y1, X2, X3}, which is no face
    group = InputGroup(1, (("X1", "Y1"), ("X2", "Y2"), ("X3", "Y3")), BitMatrix.from_lists([[1], [0], [0]]))
    with pytest.raises(ImageNotAFace):
        face_images(rc, group, "f1")


def test_input_group_validation():
    with pytest.raises(ValidationError):
        InputGroup(2, (("a", "b"),), BitMatrix.from_lists([[1, 0], [0, 1]]))
    with pytest.raises(ValidationError):
        InputGroup(1, (("a", "b"), ("b", "c")), BitMatrix.from_lists([[1], [1]]))
