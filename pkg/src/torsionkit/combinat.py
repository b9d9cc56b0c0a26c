"""Exact rational combinatorics: Bernoulli numbers and polynomials, harmonic
numbers, generalized binomials and a few binomial-sum identities.

All results are ``fractions.Fraction`` so downstream identities can be checked
with equality rather than a tolerance.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

Q = Fraction


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    # recurrence sum_{j<=k} C(k+1, j) B_j = 0 for k >= 1, B_0 = 1 (so B_1 = -1/2)
    if m == 0:
        return (Q(1),)
    prev = _bernoulli_table(m - 1)
    s = sum((comb(m + 1, j) * prev[j] for j in range(m)), Q(0))
    return prev + (-s / (m + 1),)


def bernoulli(m: int) -> Fraction:
    """B_m with the convention B_1 = -1/2."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m >= 3 and m % 2 == 1:
        return Q(0)
    return _bernoulli_table(m)[m]


def bernoulli_poly(m: int, x) -> Fraction:
    """B_m(x) = sum_j C(m, j) B_j x^(m-j), from t e^{xt}/(e^t - 1)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    x = Q(x)
    total = Q(0)
    p = Q(1)
    # accumulate from the highest j down so powers of x grow incrementally
    for j in range(m, -1, -1):
        b = bernoulli(j)
        if b:
            total += comb(m, j) * b * p
        p *= x
    return total


@lru_cache(maxsize=None)
def harmonic(m: int) -> Fraction:
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return Q(0)
    return harmonic(m - 1) + Q(1, m)


def binomial(n, k: int) -> Fraction:
    """Generalized binomial prod_{j<k} (n - j) / k!, valid for any rational n."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if isinstance(n, int) and n >= 0:
        return Q(comb(n, k))
    n = Q(n)
    num = Q(1)
    for j in range(k):
        num *= n - j
    return num / factorial(k)


def faulhaber(a: int, N: int) -> int:
    """sum_{m=1}^{a-1} m^N, which equals zeta(-N) - zeta(-N, a)."""
    return sum(m**N for m in range(1, a))


def nichtha_identity(m: int, j: int, a) -> tuple[Fraction, Fraction]:
    """Both sides of a binomial-sum identity used to re-expand Taylor terms.

    lhs = sum_r C(j,r) a^r / (j+m-r)
    rhs = ((-1)^m a^(m+j) + (a+1)^(j+1) sum_{r<m} C(j+r,j)(-a)^(m-1-r)) / (m C(j+m,m))
    """
    if m < 1 or j < 0:
        raise ValueError("need m >= 1 and j >= 0")
    a = Q(a)
    lhs = sum((comb(j, r) * a**r / (j + m - r) for r in range(j + 1)), Q(0))
    inner = sum((comb(j + r, j) * (-a) ** (m - 1 - r) for r in range(m)), Q(0))
    rhs = ((-1) ** m * a ** (m + j) + (a + 1) ** (j + 1) * inner) / (m * comb(j + m, m))
    return lhs, rhs


def binomial_coefficient_identity(m: int, j: int, r: int) -> tuple[int, int]:
    """Coefficient form of the same identity: both sides as integers."""
    lhs = m * comb(j + m, m) * comb(j, r)
    rhs = (j + m - r) * sum(
        (-1) ** q * _comb0(j + 1, r - q) * comb(j + m - 1 - q, j) for q in range(m)
    )
    return lhs, rhs


def _comb0(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def euler_convolution(m: int) -> tuple[Fraction, Fraction]:
    lhs = sum((comb(m, j) * bernoulli(j) * bernoulli(m - j) for j in range(m + 1)), Q(0))
    rhs = -m * bernoulli(m - 1) - (m - 1) * bernoulli(m)
    return lhs, rhs


def zeta_bernoulli(m: int) -> tuple[Fraction, Fraction]:
    lhs = sum(
        (comb(m, j) * bernoulli(j) * bernoulli(1 + m - j) / (1 + m - j) for j in range(m + 1)),
        Q(0),
    )
    return lhs, -bernoulli(m + 1) - bernoulli(m)


def poly_shift(coeffs: list, h) -> list[Fraction]:
    """Coefficients of p(x + h) given those of p(x), lowest degree first."""
    h = Q(h)
    out = [Q(0)] * len(coeffs)
    for n, c in enumerate(coeffs):
        if not c:
            continue
        for j in range(n + 1):
            out[j] += c * comb(n, j) * h ** (n - j)
    return out


def bernoulli_poly_coeffs(m: int) -> list[Fraction]:
    """Coefficients of B_m(x), lowest degree first."""
    return [comb(m, j) * bernoulli(m - j) for j in range(m + 1)]
