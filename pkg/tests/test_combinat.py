from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from torsionkit import combinat

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=30)


@pytest.mark.parametrize("x", [Q(0), Q(7, 3), Q(-5)])
def test_bernoulli_poly_degree_zero_is_one(x):
    assert combinat.bernoulli_poly(0, x) == 1


def test_bernoulli_poly_small_values():
    assert combinat.bernoulli_poly(2, Q(1)) == Q(1, 6)
    assert combinat.bernoulli_poly(12, Q(0)) == Q(-691, 2730)


def test_bernoulli_numbers_satisfy_recurrence():
    # sum_{j<=m} C(m+1, j) B_j = 0 for m >= 1
    for m in range(1, 30):
        assert sum(combinat.binomial(m + 1, j) * combinat.bernoulli(j) for j in range(m + 1)) == 0


def test_faulhaber_from_bernoulli_polynomials():
    a, N = 4, 2
    lhs = (combinat.bernoulli_poly(N + 1, Q(a)) - combinat.bernoulli(N + 1)) / (N + 1)
    assert lhs == 14 == combinat.faulhaber(a, N)


def test_harmonic():
    assert combinat.harmonic(0) == 0
    assert combinat.harmonic(4) == Q(25, 12)
    assert combinat.harmonic(10) == Q(7381, 2520)


def test_binomial_generalized():
    assert combinat.binomial(5, 2) == 10
    assert combinat.binomial(Q(-7, 3), 0) == 1
    assert combinat.binomial(-1, 3) == -1


@pytest.mark.parametrize("m,j,a,value", [(2, 0, Q(2), Q(1, 2)), (1, 1, Q(1), Q(3, 2)), (1, 1, Q(0), Q(1, 2))])
def test_binomial_sum_closed_form_examples(m, j, a, value):
    lhs, rhs = combinat.nichtha_identity(m, j, a)
    assert lhs == rhs == value


@given(st.integers(1, 8), st.integers(0, 8), rationals)
def test_binomial_sum_closed_form(m, j, a):
    lhs, rhs = combinat.nichtha_identity(m, j, a)
    assert lhs == rhs


@given(st.integers(0, 16).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, 16 - m))))
def test_coefficient_form(mj):
    m, j = mj
    for r in range(max(m + j, 1)):
        lhs, rhs = combinat.binomial_coefficient_identity(m, j, r)
        assert lhs == rhs


def test_euler_convolution_and_zeta_of_bernoulli():
    for m in range(1, 21):
        lhs, rhs = combinat.euler_convolution(m)
        assert lhs == rhs
    for m in range(13):
        lhs, rhs = combinat.zeta_bernoulli(m)
        assert lhs == rhs


@given(st.integers(0, 12), rationals, rationals)
def test_bernoulli_poly_shift(m, x, h):
    # B_m(x + h) = sum_j C(m, j) B_j(x) h^{m-j}
    lhs = combinat.bernoulli_poly(m, x + h)
    rhs = sum(combinat.binomial(m, j) * combinat.bernoulli_poly(j, x) * h ** (m - j) for j in range(m + 1))
    assert lhs == rhs


@given(st.integers(1, 12), rationals)
def test_bernoulli_poly_difference(m, x):
    # B_m(x + 1) - B_m(x) = m x^{m-1}
    assert combinat.bernoulli_poly(m, x + 1) - combinat.bernoulli_poly(m, x) == m * x ** (m - 1)


@given(st.integers(0, 12))
def test_bernoulli_poly_coeffs_match_values(m):
    cs = combinat.bernoulli_poly_coeffs(m)
    for x in (Q(0), Q(1, 3), Q(-2)):
        assert sum(c * x**i for i, c in enumerate(cs)) == combinat.bernoulli_poly(m, x)
