from fractions import Fraction

import pytest

from openclosed.coefficients import LogSeries
from openclosed.hypergeometric import closed_setup, i_function, open_setup
from openclosed.picard_fuchs import (NonIntegralPairing, OrderTooSmall, PFOperator,
                                     annihilation_report, apply, make_operator, solution_rank,
                                     test_betas as betas_for, verify_extension)


def _solutions(fan4, ch, order):
    ifun = i_function(closed_setup(fan4, ch), order)
    return [(str(k), v) for k, v in ifun.components()]


def test_c3_operator_shape(c3):
    _, _, ch = c3
    op = make_operator(ch.Ltilde_basis[0], ch)
    assert sum(op.monomial) == 1 or sum(op.monomial) == -1
    assert len(op.left) + len(op.right) == 6   # |<D_i, beta>| summed


def test_non_integral_pairing_rejected(c3):
    _, _, ch = c3
    with pytest.raises(NonIntegralPairing):
        make_operator((Fraction(1, 2), 0, 0, 0, 0), ch)


def test_order_too_small(c3):
    _, fan4, ch = c3
    op = [make_operator(b, ch) for b in betas_for(ch.Ltilde_basis) if sum(make_operator(b, ch).monomial) < 0][0]
    F = LogSeries.one(1, bound=3)
    with pytest.raises(OrderTooSmall):
        apply(op, F, safe_order=3)


def test_c3_annihilation_and_rank(c3):
    _, fan4, ch = c3
    sols = _solutions(fan4, ch, 8)
    ops = [make_operator(b, ch) for b in betas_for(ch.Ltilde_basis)]
    assert annihilation_report(ops, sols, 6)["passed"]
    assert solution_rank(sols)[0] == 3


def test_kp2_annihilation_and_rank(kp2):
    _, fan4, ch = kp2
    sols = _solutions(fan4, ch, 9)
    ops = [make_operator(b, ch) for b in betas_for(ch.Ltilde_basis)]
    assert len(ops) == 8
    assert annihilation_report(ops, sols, 6)["passed"]
    assert solution_rank(sols)[0] == 8


def test_wrong_operator_is_detected(c3):
    _, fan4, ch = c3
    op = make_operator(ch.Ltilde_basis[0], ch)
    doubled = PFOperator(op.beta, tuple(2 * e for e in op.monomial), op.left, op.right, op.m)
    assert not annihilation_report([doubled], _solutions(fan4, ch, 8), 6)["passed"]


def test_open_solutions_solve_closed_system(kp2):
    fan3, fan4, ch = kp2
    ifun = i_function(open_setup(fan3, ch), 9)
    sols = [(str(k), v) for k, v in ifun.components()]
    assert solution_rank(sols)[0] == 3
    assert verify_extension(ch, sols, 6)["passed"]
