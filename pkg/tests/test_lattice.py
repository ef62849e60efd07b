from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from openclosed.lattice import (NonPrimitive, det, kernel_basis, matmul, matvec, rank,
                                rational_inverse, rational_rank, rational_solve,
                                smith_normal_form, unimodular_complete)

small = st.integers(min_value=-7, max_value=7)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


def test_snf_known_diagonal():
    snf = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert snf.diagonal == [2, 6, 12]
    assert snf.rank == 3


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_snf_reconstructs_and_divides(A):
    snf = smith_normal_form(A)
    assert matmul(matmul(snf.U, snf.S), snf.V) == A
    assert abs(det(snf.U)) == 1 and abs(det(snf.V)) == 1
    d = snf.diagonal
    nz = [x for x in d if x]
    assert d[:len(nz)] == nz and all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert len(nz) == rank(A) == snf.rank


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_is_annihilated_and_full(A):
    K = kernel_basis(A)
    n = len(A[0])
    for v in K:
        assert matvec(A, v) == [0] * len(A)
    assert len(K) == n - rank(A)


@given(st.lists(small, min_size=2, max_size=4).filter(lambda v: any(v)))
def test_unimodular_completion(v):
    from math import gcd
    from functools import reduce
    if reduce(gcd, v) != 1:
        with pytest.raises(NonPrimitive):
            unimodular_complete(v)
        return
    M = unimodular_complete(v)
    assert abs(det(M)) == 1
    assert [row[0] for row in M] == list(v)


def test_rational_solve_and_inverse():
    A = [[2, 1], [1, 3]]
    x = rational_solve(A, [1, 2])
    assert x == [Fraction(1, 5), Fraction(3, 5)]
    inv = rational_inverse(A)
    assert matmul(A, inv) == [[1, 0], [0, 1]]
    assert rational_solve([[1, 1], [2, 2]], [1, 3]) is None
    assert rational_rank([[1, 2], [2, 4], [0, Fraction(1, 3)]]) == 2
