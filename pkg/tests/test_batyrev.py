from fractions import Fraction

import pytest

from openclosed import batyrev
from openclosed.batyrev import (NewtonPolytopeCollapse, ParameterDomainError, Polytope,
                                ReductionFailure, RegularityFailure, batyrev_pipeline, build_extension,
                                build_laurent, compute_ring, filtration_report,
                                format_monomial, iota_monomial)


def test_polytope_faces_and_volume():
    square = Polytope.hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert square.volume() == 2
    assert square.face_codim(2, (1, 1)) == 0
    assert square.face_codim(2, (1, 0)) == 1
    assert square.face_codim(1, (0, 0)) == 2
    assert square.face_codim(0, (0, 0)) == 3
    assert not square.contains(1, (2, 0))
    assert len(square.points(2)) == 9


def test_segment_volume():
    assert Polytope.hull([(-1,), (2,)]).volume() == 3


def test_open_parameter_must_be_nonzero(c3):
    _, fan4, ch = c3
    with pytest.raises(ParameterDomainError):
        build_laurent(ch, fan4, (), Fraction(0))


def test_vanishing_coefficient_collapses_newton_polytope(kp2):
    _, fan4, ch = kp2
    with pytest.raises(NewtonPolytopeCollapse):
        build_laurent(ch, fan4, (Fraction(0),), Fraction(1, 64))


def test_discriminant_point_fails_certificate(c3):
    _, fan4, ch = c3
    H0 = build_laurent(ch, fan4, (), Fraction(-1, 4))[2]
    with pytest.raises(RegularityFailure):
        compute_ring(H0)


def test_c3_rings(c3_rings):
    RH, RT, R0 = c3_rings["rings"]
    assert [R.dim for R in (RH, RT, R0)] == [1, 3, 2]
    assert [R.dim == R.volume for R in (RH, RT, R0)] == [True] * 3
    assert [format_monomial(RT.F, m) for m in RT.basis] == ["1", "X0Z", "X0^2Z"]
    assert [format_monomial(R0.F, m) for m in R0.basis] == ["1", "X0"]
    assert RT.I_ranks == [0, 1, 1, 1, 2, 3]
    assert R0.I_ranks == [0, 1, 1, 2]
    assert RH.I_ranks == [0, 0, 0, 0, 1]
    assert RT.E_ranks == [1, 2, 3, 3]


def test_c3_hodge_data(c3_rings):
    rep = filtration_report(c3_rings["rings"][1])
    assert rep["tate"] == [1, 2, 3]
    assert rep["W_inferred"]


def test_c3_extension_maps(c3_rings):
    ext = c3_rings["extension"]
    assert ext.iota == [[0, 1, 0], [0, 0, 1]]
    assert ext.pi == [[1], [0], [0]]
    assert all(ext.checks.values()), ext.checks


def test_iota_lands_on_lattice_points_for_nontrivial_groups(kp2):
    _, fan4, _ = kp2
    for k in range(1, 4):
        for b0 in range(-4 * k, k + 1):
            a, (deg, p) = iota_monomial(fan4, k, b0)
            assert deg == k + 1
            assert all(isinstance(c, int) for c in p)
            assert fan4.a * p[1] - fan4.b * p[0] == b0


def test_broken_lift_is_detected(c3, c3_rings, monkeypatch):
    _, fan4, _ = c3
    real = batyrev.iota_monomial

    def flipped(f4, k, b0):
        a, (deg, p) = real(f4, k, b0)
        return -a, (deg, (-p[0], p[1], p[2]))
    monkeypatch.setattr(batyrev, "iota_monomial", flipped)
    try:
        ext = build_extension(c3_rings["rings"], fan4, Fraction(1, 64))
    except ReductionFailure:
        return
    assert not all(ext.checks.values())


def test_kp2_rings(kp2):
    _, fan4, ch = kp2
    out = batyrev_pipeline(ch, fan4, (Fraction(1, 64),), Fraction(1, 64))
    dims = [R.dim for R in out["rings"]]
    assert dims == [3, 8, 5]
    assert all(R.dim == R.volume for R in out["rings"])
    assert all(out["extension"].checks.values())


def test_half_framing_rings_over_gaussian_rationals(c3_half):
    _, fan4, ch = c3_half
    out = batyrev_pipeline(ch, fan4, (), Fraction(1, 64))
    assert [R.dim for R in out["rings"]] == [1, 4, 3]
    assert out["rings"][1].F.field == 4
    assert all(out["extension"].checks.values())
