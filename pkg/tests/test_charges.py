from fractions import Fraction

import pytest

from openclosed.charges import (UserBasisInvalid, build_charges, enumerate_open, in_lattice,
                                open_bijection_audit)


def test_c3_lattice(c3):
    _, _, ch = c3
    assert ch.L_basis == []
    assert ch.Ltilde_basis in ([[1, 1, -2, 1, -1]], [[-1, -1, 2, -1, 1]])
    assert ch.w == (1, 1, -2)


def test_half_framing_lattice(c3_half):
    _, _, ch = c3_half
    assert ch.Ltilde_basis == [[2, 1, -3, 1, -1]]
    assert ch.w == (1, Fraction(1, 2), Fraction(-3, 2))


def test_kp2_lattice_membership(kp2):
    _, _, ch = kp2
    assert ch.L_basis == [[-3, 1, 1, 1]]
    for row in [(-3, 1, 1, 1, 0, 0), (1, 1, -2, 0, 1, -1), (2, 2, -4, 0, 2, -2)]:
        assert in_lattice(ch.Ltilde_basis, row)
    assert not in_lattice(ch.Ltilde_basis, (1, 0, 0, 0, 0, -1))


@pytest.mark.parametrize("name", ["c3", "c3_half", "kp2"])
def test_structural_identities(name, request):
    _, _, ch = request.getfixturevalue(name)
    identities = ch.identity_check()
    assert all(v for k, v in identities.items() if isinstance(v, bool))


def test_open_column_is_w_then_inverse_framing(c3_half):
    _, _, ch = c3_half
    col = ch.identity_check()["open_column_value"]
    assert col == [1, Fraction(1, 2), Fraction(-3, 2), Fraction(1, 2), Fraction(-1, 2)]


def test_kp2_nef_shift(kp2):
    _, _, ch = kp2
    assert ch.s_coeffs == [[1]]
    assert ch.shifts == (1,)


@pytest.mark.parametrize("H, reason", [([[-1]], "ℤ_{≥0}"), ([[0]], "Kirwan")])
def test_user_basis_checked(kp2, H, reason):
    fan3, fan4, _ = kp2
    with pytest.raises(UserBasisInvalid, match=reason):
        build_charges(fan3, fan4, user_H=H)


def test_open_classes_biject_with_closed(kp2):
    _, fan4, ch = kp2
    classes = enumerate_open(ch, fan4, 5)
    assert classes and open_bijection_audit(ch, classes)
    assert all(c.d >= 1 for c in classes)
