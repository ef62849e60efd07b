from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from openclosed import GeometryInput, load_bundled, pipeline
from openclosed.closed_geometry import (box_age_check, exact_volume_3d,
                                        extend, neighbor_framings, neighbor_input)
from openclosed.open_geometry import GeometryError, build_fan


def test_c3_extension(c3):
    fan3, fan4, _ = c3
    assert fan4.volume_identity_check() == (1, 3, 2, True)
    assert fan4.S == 2
    assert [set(c) for c in fan4.extra_cones] == [{2, 3, 4, 5}, {1, 3, 4, 5}]
    assert exact_volume_3d(fan4) == 3


def test_c3_neighbor_framing(c3):
    _, fan4, _ = c3
    assert neighbor_framings(fan4) == [(1, 1, 1, Fraction(1)), (2, 1, -2, Fraction(-2))]
    nb = neighbor_input(fan4, 2)
    assert nb.framing == -2 and nb.brane_edge == (3, 1)


def test_kp2_extension(kp2):
    _, fan4, _ = kp2
    assert fan4.volume_identity_check() == (3, 8, 5, True)
    assert [(e.order, e.c_prev, e.c_cur) for e in fan4.extra] == [(1, 1, 0), (4, 0, -4)]
    assert all(r["holds"] for r in box_age_check(fan4))


def test_half_framing_has_stacky_extra_cone(c3_half):
    _, fan4, _ = c3_half
    assert [(e.order, e.c_prev, e.c_cur) for e in fan4.extra] == [(2, 2, 0), (1, 0, -1)]
    assert fan4.volume_identity_check() == (1, 4, 3, True)


@pytest.mark.parametrize("a, b", [(0, 1), (-1, 2), (2, 4)])
def test_framing_must_be_reduced_with_positive_denominator(a, b):
    fan3 = build_fan(load_bundled("c3_f1"))
    with pytest.raises(GeometryError):
        extend(fan3, a, b)


framings = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


@pytest.mark.parametrize("name", ["c3_f1", "kp2_f1"])
@given(f=framings)
@settings(max_examples=12, deadline=None)
def test_volume_identity_and_box_ages_for_any_framing(name, f):
    doc = load_bundled(name).to_dict()
    doc["brane"]["framing"] = f"{f.numerator}/{f.denominator}"
    _, fan4, _ = pipeline(GeometryInput.from_dict(doc))
    assert fan4.volume_identity_check()[3]
    assert all(r["holds"] for r in box_age_check(fan4))
    t = fan4.toric()
    assert all(len(t.box(c)) == t.order(c) for c in fan4.cones4)
