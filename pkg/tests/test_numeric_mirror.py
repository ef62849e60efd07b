from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from openclosed.batyrev import build_laurent
from openclosed.hypergeometric import disk_function
from openclosed.numeric_mirror import (NoMatchingRoot, NonSimpleRoots, aberth, h0_roots,
                                       open_mirror_numeric_check, regularity_low_dim)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
@settings(max_examples=60, deadline=None)
def test_aberth_agrees_with_companion_matrix(coeffs):
    roots, resid = aberth(coeffs)
    ref = np.roots(coeffs[::-1])
    assert len(roots) == len(ref)
    # every reference root is close to some computed root (loose for clustered roots)
    for r in ref:
        assert min(abs(r - z) for z in roots) < 1e-4 * (1 + abs(r))


def test_c3_mirror_curve_roots(c3):
    _, fan4, ch = c3
    H0 = build_laurent(ch, fan4, (), Fraction(1, 100))[2]
    rs = sorted(h0_roots(H0).roots, key=lambda z: z.real)
    ref = sorted(np.roots([1, 1, -0.01]))
    assert np.allclose(rs, ref, atol=1e-12)


def test_high_precision_roots(c3):
    _, fan4, ch = c3
    H0 = build_laurent(ch, fan4, (), Fraction(1, 100))[2]
    rs = h0_roots(H0, precision=30)
    assert rs.residual < 1e-30


def test_double_root_detected(c3):
    _, fan4, ch = c3
    H0 = build_laurent(ch, fan4, (), Fraction(-1, 4))[2]
    with pytest.raises(NonSimpleRoots):
        h0_roots(H0)
    assert not regularity_low_dim(H0)


@pytest.mark.parametrize("name", ["c3", "c3_half", "kp2"])
def test_generic_parameters_are_regular(name, request):
    _, fan4, ch = request.getfixturevalue(name)
    q = tuple(Fraction(1, 64) for _ in ch.s_coeffs)
    H, _, H0 = build_laurent(ch, fan4, q, Fraction(1, 64))
    assert regularity_low_dim(H0)
    assert regularity_low_dim(H)


def test_kp2_mirror_curve_degree(kp2):
    _, fan4, ch = kp2
    H0 = build_laurent(ch, fan4, (Fraction(1, 64),), Fraction(1, 64))[2]
    assert len(h0_roots(H0)) == 5


def test_third_derivative_has_no_matching_root(c3):
    fan3, fan4, ch = c3
    W = disk_function(ch, fan3, fan4, 0, 14)
    with pytest.raises(NoMatchingRoot) as info:
        open_mirror_numeric_check(W, ch, fan4, (), Fraction(1, 100))
    assert info.value.args[0]["residual"] > 1e-3


def test_second_derivative_matches_negated_log_derivative(c3):
    fan3, fan4, ch = c3
    W = disk_function(ch, fan3, fan4, 0, 14)
    rep = open_mirror_numeric_check(W, ch, fan4, (), Fraction(1, 100), tol=1e-12,
                                    theta_power=2, signed=True)
    assert rep["best_assignment"][0] == "-"
