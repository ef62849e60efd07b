from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from openclosed import pipeline
from openclosed.closed_geometry import neighbor_input
from openclosed.coefficients import LogSeries
from openclosed.hypergeometric import (GammaFactor, closed_setup, disk_function, hypercorr_check,
                                       i_function, mirror_maps, open_mirror_map)


def c3_disk(d):
    return Fraction((-1) ** d * factorial(2 * d - 1), d * factorial(d) ** 2)


def local_p2_mirror(d):
    return Fraction(3 * (-1) ** d * factorial(3 * d - 1), factorial(d) ** 3)


@given(st.fractions(min_value=-12, max_value=12, max_denominator=6),
       st.fractions(min_value=Fraction(1, 50), max_value=5, max_denominator=50))
def test_gamma_factor_telescopes(c, u):
    assert GammaFactor(c + 1).value(u) * (u + c + 1) == GammaFactor(c).value(u)


def test_gamma_factor_integer_values():
    # ratio Gamma(1 + u) / Gamma(1 + u + c) at u = 0 for integer c >= 0 is 1 / c!
    for c in range(5):
        assert GammaFactor(c).value(Fraction(0)) == Fraction(1, factorial(c))


def test_c3_i_function(c3):
    _, fan4, ch = c3
    setup = closed_setup(fan4, ch)
    ifun = i_function(setup, 8)
    assert mirror_maps(setup, ifun) == {0: LogSeries.log(1, 0)}
    (two,) = [v for (n, _), v in ifun.components() if n == 2]
    series = two.substitute_logs_zero()
    assert [series.coefficient([d]) for d in range(1, 9)] == [2 * c3_disk(d) for d in range(1, 9)]
    assert two.coefficient([0], [2]) == Fraction(1, 2)


def test_kp2_mirror_maps(kp2):
    _, fan4, ch = kp2
    setup = closed_setup(fan4, ch)
    taus = mirror_maps(setup, i_function(setup, 4))
    closed = taus[0] - LogSeries.log(2, 0)
    assert [closed.coefficient([d, 0]) for d in range(1, 5)] == [local_p2_mirror(d) for d in range(1, 5)]
    tau_open = open_mirror_map(setup, ch, taus)
    corr = tau_open - LogSeries.log(2, 1)
    assert all(e[1] == 0 for e, _, _ in corr.items())
    assert [corr.coefficient([d, 0]) for d in range(1, 5)] == [-local_p2_mirror(d) / 3 for d in range(1, 5)]


def test_c3_disk_function(c3):
    fan3, fan4, ch = c3
    W = disk_function(ch, fan3, fan4, 0, 8)
    assert [W.coefficient([d]) for d in range(1, 9)] == [c3_disk(d) for d in range(1, 9)]


def test_neighbor_brane_disk_function_is_negated(c3):
    fan3, fan4, ch = c3
    W = disk_function(ch, fan3, fan4, 0, 8)
    f3, f4, ch2 = pipeline(neighbor_input(fan4, 2))
    assert (disk_function(ch2, f3, f4, 0, 8) + W).is_zero()


def test_kp2_disk_function_reduces_to_c3_at_zero_kahler(kp2, c3):
    fan3, fan4, ch = kp2
    W = disk_function(ch, fan3, fan4, 0, 6)
    x_only = {e[1]: v for e, _, v in W.items() if e[0] == 0}
    assert x_only == {Fraction(d): c3_disk(d) for d in range(1, 7)}


def test_hypercorr_c3(c3):
    fan3, fan4, ch = c3
    rep = hypercorr_check(ch, fan3, fan4, 6, sectors=[0])
    assert rep["passed"]


def test_hypercorr_half_framing_both_sectors(c3_half):
    fan3, fan4, ch = c3_half
    rep = hypercorr_check(ch, fan3, fan4, 4)
    assert rep["passed"] and len(rep["sectors"]) == 2
    assert rep["sectors"][1]["age"] == "2"


def test_hypercorr_kp2(kp2):
    fan3, fan4, ch = kp2
    assert hypercorr_check(ch, fan3, fan4, 3)["passed"]


@pytest.mark.parametrize("p, expected", [(1, False), (2, True)])
def test_neighbor_brane_needs_iterated_limit(c3, p, expected):
    _, fan4, _ = c3
    f3, f4, ch = pipeline(neighbor_input(fan4, 2))
    assert hypercorr_check(ch, f3, f4, 4, p=p)["passed"] is expected
