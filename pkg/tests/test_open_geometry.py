from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from openclosed import GeometryInput, load_bundled
from openclosed.open_geometry import (GeometryError, MissingLatticePoint, NotATriangulation,
                                      NotOuterBrane, box_elements, build_fan, lattice_index,
                                      parse_rational)


def kp2_doc():
    return load_bundled("kp2_f1").to_dict()


def test_c3_normal_form():
    fan = build_fan(load_bundled("c3_f1"))
    assert fan.b == [(1, 0, 1), (0, 1, 1), (0, 0, 1)]
    assert (fan.R, fan.Rp, fan.framing, fan.a, fan.bb) == (3, 3, 1, 1, 1)
    assert fan.normalized_volume() == 1


def test_kp2_normal_form_moves_interior_point_to_b4():
    fan = build_fan(load_bundled("kp2_f1"))
    assert fan.b == [(1, 0, 1), (0, 1, 1), (0, 0, 1), (3, -1, 1)]
    assert fan.perm == [4, 1, 2, 3]
    assert fan.normalized_volume() == 3
    assert fan.regular


def test_half_framing_keeps_a_and_b():
    fan = build_fan(load_bundled("c3_f1_2"))
    assert fan.framing == Fraction(1, 2)
    assert (fan.a, fan.bb) == (2, 1)


def test_round_trip_of_input_document():
    doc = kp2_doc()
    assert GeometryInput.from_dict(doc).to_dict() == doc


def test_interior_brane_rejected():
    doc = dict(kp2_doc(), brane={"edge": [1, 4], "framing": "1"})
    with pytest.raises(NotOuterBrane):
        build_fan(GeometryInput.from_dict(doc))


def test_missing_interior_point_rejected():
    doc = dict(kp2_doc(), points=[[1, 0], [0, 1], [-1, -1]], rays=3, triangulation=[[1, 2, 3]])
    with pytest.raises(MissingLatticePoint):
        build_fan(GeometryInput.from_dict(doc))


@pytest.mark.parametrize("tris", [
    [[1, 2, 4], [2, 3, 4]],                       # gap
    [[1, 2, 4], [2, 3, 4], [3, 1, 4], [1, 2, 3]],  # overlap
])
def test_bad_triangulations_rejected(tris):
    doc = dict(kp2_doc(), triangulation=tris)
    with pytest.raises(NotATriangulation):
        build_fan(GeometryInput.from_dict(doc))


@pytest.mark.parametrize("doc", [{"points": [[0, 0]]}, {"rays": 3}])
def test_malformed_document(doc):
    with pytest.raises(GeometryError):
        GeometryInput.from_dict(doc)


def test_parse_rational():
    assert parse_rational("−3/4") == Fraction(-3, 4)
    with pytest.raises(GeometryError):
        parse_rational("1/0")


coords = st.integers(-4, 4)


@given(st.lists(st.tuples(coords, coords), min_size=3, max_size=3, unique=True))
@settings(max_examples=80, deadline=None)
def test_box_size_equals_group_order(pts):
    (x1, y1), (x2, y2), (x3, y3) = pts
    assume((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1) != 0)
    vecs = [(x, y, 1) for x, y in pts]
    box = box_elements(vecs, [1, 2, 3])
    assert len(box) == lattice_index(vecs)
    # Calabi-Yau simplex: every age is an integer in [0, 3)
    assert all(b.age.denominator == 1 and 0 <= b.age < 3 for b in box)
