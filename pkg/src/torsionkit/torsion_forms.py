"""Torsion forms of O(ell) on projective-line bundles P(E) -> B.

The degree-2n component is a polynomial in c1(E), c2(E) whose coefficients
come from scalar sequences T(ell, m) = T1 + T2 + T3, one for each power of
c1^2 - 4 c2.  This module evaluates those scalars exactly, expands them for
large ell (numerically with a certified remainder, or symbolically over a
basis of transcendental constants), and assembles the Chern polynomial.

Symbolic coefficients live in ``SymbolicCoeff``: rational combinations of
1, log(2 pi), zeta'(-k) for odd k, and zeta(k)/pi^(k-1) for odd k >= 3.
Laurent expressions in ell with an optional log(ell) factor are ``LaurentLog``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .combinat import bernoulli, bernoulli_poly, bernoulli_poly_coeffs, harmonic
from .lerch import (
    WORK_DPS,
    Angle,
    BoundedValue,
    ToleranceUnreachable,
    _hurwitz_mp,
    mpq,
    remainder_bound_C,
    zeta_prime_neg_mp,
)

Q = Fraction
_DPS = WORK_DPS + 20

# ---------------------------------------------------------------- symbolic coefficients

ONE = "1"
LOG2PI = "log(2pi)"


def zp_symbol(k: int) -> str:
    return f"zeta'(-{k})"


def zeta_pi_symbol(k: int) -> str:
    return f"zeta({k})/pi^{k - 1}"


def _symbol_key(s: str):
    if s == ONE:
        return (0, 0)
    if s == LOG2PI:
        return (1, 0)
    if s.startswith("zeta'"):
        return (2, int(s[7:-1]))
    return (3, int(s[5 : s.index(")")]))


class SymbolicCoeff:
    """Rational linear combination of basis constants."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[str, Fraction] = {}
        for s, c in (terms or {}).items():
            if c:
                self.terms[s] = Q(c)

    @classmethod
    def of(cls, symbol: str, c=1) -> SymbolicCoeff:
        return cls({symbol: Q(c)})

    @classmethod
    def rational(cls, c) -> SymbolicCoeff:
        return cls({ONE: Q(c)})

    def __add__(self, other: SymbolicCoeff) -> SymbolicCoeff:
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, Q(0)) + c
        return SymbolicCoeff(out)

    def __neg__(self) -> SymbolicCoeff:
        return SymbolicCoeff({s: -c for s, c in self.terms.items()})

    def __sub__(self, other: SymbolicCoeff) -> SymbolicCoeff:
        return self + (-other)

    def __mul__(self, q) -> SymbolicCoeff:
        q = Q(q)
        return SymbolicCoeff({s: c * q for s, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolicCoeff):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def symbols(self) -> list[str]:
        return sorted(self.terms, key=_symbol_key)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for s in self.symbols():
            c = self.terms[s]
            parts.append(f"{c}" if s == ONE else f"{c}*{s}")
        return " + ".join(parts)

    def evaluate_mp(self):
        """(value, error) as mp numbers with certified symbol values."""
        val = mpmath.mpf(0)
        err = mpmath.mpf(0)
        for s, c in self.terms.items():
            v, e = symbol_value(s)
            val += mpq(c) * v
            err += abs(mpq(c)) * e
        return val, err

    def evaluate(self) -> BoundedValue:
        with mpmath.workdps(_DPS):
            v, e = self.evaluate_mp()
            x = float(v)
            return BoundedValue(complex(x), float(e) + 2.0**-52 * abs(x))


@lru_cache(maxsize=None)
def _symbol_value_cached(s: str, dps: int):
    with mpmath.workdps(dps):
        if s == ONE:
            return mpmath.mpf(1), mpmath.mpf(0)
        if s == LOG2PI:
            return mpmath.log(2 * mpmath.pi), mpmath.mpf(10) ** (-dps + 3)
        if s.startswith("zeta'"):
            return zeta_prime_neg_mp(int(s[7:-1]))
        k = int(s[5 : s.index(")")])
        z, e = _hurwitz_mp(k, 1, M=60, p=24)
        pk = mpmath.pi ** (k - 1)
        return z / pk, e / pk + mpmath.mpf(10) ** (-dps + 3)


def symbol_value(s: str):
    return _symbol_value_cached(s, _DPS)


def zeta_prime_symbolic(k: int) -> SymbolicCoeff:
    """zeta'(-k) in the basis: odd k stays a symbol, even k reduces to zeta(k+1)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return SymbolicCoeff.of(LOG2PI, Q(-1, 2))
    if k % 2:
        return SymbolicCoeff.of(zp_symbol(k))
    h = k // 2
    # zeta'(-2h) = (-1)^h (2h)! zeta(2h+1) / (2 (2 pi)^{2h})
    return SymbolicCoeff.of(zeta_pi_symbol(k + 1), Q((-1) ** h * math.factorial(k), 2 * 4**h))


# ---------------------------------------------------------------- Laurent polynomials in ell with log ell


class LaurentLog:
    """sum of c_{j,p} ell^j (log ell)^p with SymbolicCoeff values, p in {0, 1}."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[tuple[int, int], SymbolicCoeff] = {}
        for k, c in (terms or {}).items():
            if not c.is_zero():
                self.terms[k] = c

    def _acc(self, j: int, p: int, c: SymbolicCoeff):
        cur = self.terms.get((j, p))
        new = c if cur is None else cur + c
        if new.is_zero():
            self.terms.pop((j, p), None)
        else:
            self.terms[(j, p)] = new

    def add_poly(self, poly, sym: SymbolicCoeff, p: int = 0, shift: int = 0) -> LaurentLog:
        for i, c in enumerate(poly):
            if c:
                self._acc(i + shift, p, sym * c)
        return self

    def __add__(self, other: LaurentLog) -> LaurentLog:
        out = LaurentLog(dict(self.terms))
        for (j, p), c in other.terms.items():
            out._acc(j, p, c)
        return out

    def __neg__(self) -> LaurentLog:
        return LaurentLog({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: LaurentLog) -> LaurentLog:
        return self + (-other)

    def __mul__(self, q) -> LaurentLog:
        return LaurentLog({k: c * q for k, c in self.terms.items()})

    __rmul__ = __mul__

    def shift(self, d: int) -> LaurentLog:
        return LaurentLog({(j + d, p): c for (j, p), c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentLog):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, j: int, p: int = 0) -> SymbolicCoeff:
        return self.terms.get((j, p), SymbolicCoeff())

    def restrict(self, pred) -> LaurentLog:
        return LaurentLog({k: c for k, c in self.terms.items() if pred(*k)})

    def items(self):
        """(j, p, coeff) sorted by descending power, log term first."""
        return [(j, p, self.terms[(j, p)]) for j, p in sorted(self.terms, key=lambda k: (-k[0], -k[1]))]

    def top_degree(self) -> int | None:
        return max((j for j, _ in self.terms), default=None)

    def evaluate_mp(self, ell):
        """(value, error) at ell; error covers symbol uncertainty and rounding."""
        x = mpmath.mpf(ell)
        lg = mpmath.log(x)
        val = mpmath.mpf(0)
        err = mpmath.mpf(0)
        mag = mpmath.mpf(0)
        for (j, p), c in self.terms.items():
            w = x**j * lg**p
            v, e = c.evaluate_mp()
            val += v * w
            err += e * abs(w)
            mag += abs(v * w)
        return val, err + mag * mpmath.mpf(10) ** (-mpmath.mp.dps + 5)

    def __repr__(self) -> str:
        out = []
        for j, p, c in self.items():
            out.append(f"({c})*ell^{j}" + ("*log(ell)" if p else ""))
        return " + ".join(out) if out else "0"


# ---------------------------------------------------------------- polynomial helpers in ell


def _pmul(a: list, b: list) -> list:
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _ppow(base: list, e: int) -> list:
    out = [Q(1)]
    for _ in range(e):
        out = _pmul(out, base)
    return out


@lru_cache(maxsize=None)
def _bneg(n: int) -> tuple:
    """Coefficients of B_n(-ell/2) in powers of ell."""
    return tuple(c * Q(-1, 2) ** i for i, c in enumerate(bernoulli_poly_coeffs(n)))


def _check_m(m: int):
    if m < 0:
        raise ValueError("m must be nonnegative")


def _t24_r_sum(q: int, j: int) -> Fraction:
    return sum((Q(math.comb(q, r)) * Q(-1, 2) ** r / (r - j) for r in range(max(0, 1 + j), q + 1)), Q(0))


def _shift_zeta(n: int) -> Fraction:
    # zeta applied to (k+1)^n
    return Q((-1) ** n, n + 1) * bernoulli(n + 1) - 1 + Q(1, n + 1)


# ---------------------------------------------------------------- T terms, Bernoulli-polynomial presentation


def t1_symbolic(m: int, zeta_weight: int = 1) -> LaurentLog:
    """sum_k (w zeta'(-2k-1) - H_{2k+1} B_{2k+2}/(2k+2)) C(2m+1,2k+1) B_{2m-2k}(-ell/2).

    With w = 2 this is the full first summand; w = 1 is what remains after the
    odd part of the zeta' sum of the log-sum expansion is absorbed.
    """
    _check_m(m)
    out = LaurentLog()
    for k in range(m + 1):
        n = 2 * k + 1
        sym = SymbolicCoeff.of(zp_symbol(n), zeta_weight) - SymbolicCoeff.rational(
            harmonic(n) * bernoulli(n + 1) / (n + 1)
        )
        out.add_poly([c * math.comb(2 * m + 1, n) for c in _bneg(2 * m - 2 * k)], sym)
    return out


def t3_symbolic(m: int) -> LaurentLog:
    _check_m(m)
    f = -(2 * harmonic(2 * m + 1) - harmonic(m)) / (2 * m + 2)
    return LaurentLog().add_poly([c * f for c in _bneg(2 * m + 2)], SymbolicCoeff.rational(1))


def t21_symbolic(m: int) -> LaurentLog:
    _check_m(m)
    n = 2 * m + 2
    total = [Q(0)] * (n + 1)
    for h in range(1, n + 1):
        p = _pmul(list(_bneg(n - h)), _ppow([Q(1), Q(1)], h))
        f = -Q(math.comb(n, h), h * n)
        for i, c in enumerate(p):
            total[i] += f * c
    return LaurentLog().add_poly(total, SymbolicCoeff.rational(1))


def t22_symbolic(m: int) -> LaurentLog:
    _check_m(m)
    p = _pmul([Q(1), Q(1, 2)], list(_bneg(2 * m + 1)))
    b = _bneg(2 * m + 2)
    poly = [-(b[i] if i < len(b) else 0) - (p[i] if i < len(p) else 0) for i in range(max(len(b), len(p)))]
    return LaurentLog().add_poly(poly, SymbolicCoeff.rational(1), p=1)


def t23_even_symbolic(m: int) -> LaurentLog:
    _check_m(m)
    out = LaurentLog().add_poly(list(_bneg(2 * m + 1)), SymbolicCoeff.of(LOG2PI, Q(1, 2)))
    for k in range(1, m + 1):
        f = Q((-1) ** (k + 1) * math.factorial(2 * m + 1), 2 * math.factorial(2 * m + 1 - 2 * k) * 4**k)
        out.add_poly(list(_bneg(2 * m + 1 - 2 * k)), SymbolicCoeff.of(zeta_pi_symbol(2 * k + 1), f))
    return out


def _sign(j: int) -> int:
    # (-1)^j as an int for negative j too
    return -1 if j % 2 else 1


def _t24_coefficient(m: int, j: int, q: int, inner: Fraction) -> Fraction:
    d = q - j
    tail = (-1) ** d * bernoulli(d + 1) / (d + 1) - 1 + Q(1, d + 1)
    return inner * math.comb(2 * m + 1, q) * bernoulli(2 * m + 1 - q) * tail


def t24_symbolic(m: int, N: int) -> LaurentLog:
    """Finite part of the log-dagger contribution, powers ell^j for 1-N <= j <= 2m."""
    _check_m(m)
    if N < 1:
        raise ValueError("N must be positive")
    out = LaurentLog()
    one = SymbolicCoeff.rational(1)
    for j in range(1 - N, 2 * m + 1):
        c = Q(0)
        for q in range(max(0, 1 + j), 2 * m + 2):
            c += _t24_coefficient(m, j, q, _t24_r_sum(q, j)) * _sign(j)
        if c:
            out._acc(j, 0, one * c)
    return out


def t_terms_symbolic(m: int, N: int) -> dict[str, LaurentLog]:
    """The truncated expansion of T(ell, m) split by origin."""
    return {
        "T1": t1_symbolic(m, 1),
        "T3": t3_symbolic(m),
        "T21": t21_symbolic(m),
        "T22": t22_symbolic(m),
        "T23even": t23_even_symbolic(m),
        "T24": t24_symbolic(m, N),
    }


@lru_cache(maxsize=None)
def _t_total_symbolic(m: int, N: int) -> LaurentLog:
    out = LaurentLog()
    for part in t_terms_symbolic(m, N).values():
        out = out + part
    return out


def t_coeff_symbolic(m: int, N: int) -> list[tuple[int, int, SymbolicCoeff]]:
    """Exact coefficients of ell^j (log ell)^p in the expansion of T(ell, m), remainder omitted."""
    if m > 6 or N > 10:
        raise ValueError("supported range is m <= 6, N <= 10")
    return _t_total_symbolic(m, N).items()


# ---------------------------------------------------------------- T terms, power presentation


def t1_power(m: int) -> LaurentLog:
    out = LaurentLog()
    for j in range(2 * m + 1):
        for k in range((2 * m - j) // 2 + 1):
            n = 2 * k + 1
            sym = SymbolicCoeff.of(zp_symbol(n), 2) - SymbolicCoeff.rational(harmonic(n) * bernoulli(n + 1) / (n + 1))
            f = Q(math.factorial(2 * m + 1) * bernoulli(2 * m - 2 * k - j)) / (
                math.factorial(2 * m - 2 * k - j) * math.factorial(j) * math.factorial(n)
            )
            out._acc(j, 0, sym * (f * Q(-1, 2) ** j))
    return out


def t3_power(m: int) -> LaurentLog:
    h = 2 * harmonic(2 * m + 1) - harmonic(m)
    out = LaurentLog()
    for j in range(2 * m + 3):
        f = -h * Q(math.factorial(2 * m + 1), math.factorial(2 * m + 2 - j) * math.factorial(j))
        out._acc(j, 0, SymbolicCoeff.rational(f * bernoulli(2 * m + 2 - j) * Q(-1, 2) ** j))
    return out


def t21_power(m: int) -> LaurentLog:
    n = 2 * m + 2
    out = LaurentLog()
    for j in range(2 * m + 1):
        c = Q(0)
        for h in range(j + 1, n + 1):
            s = (-1) ** j + sum(math.comb(j + r, r) * 2**r for r in range(h - j))
            c -= s * Q(math.comb(n, h) * bernoulli(n - h), 2**h * (h - j) * n)
        out._acc(j, 0, SymbolicCoeff.rational(c))
    for j in range(1, n + 1):
        c = (2 * harmonic(j) - harmonic(j // 2)) * math.comb(n, j) * bernoulli(n - j) / n * Q(-1, 2) ** j
        out._acc(j, 0, SymbolicCoeff.rational(c))
    return out


def t22_power(m: int) -> LaurentLog:
    out = LaurentLog()
    for j in range(2 * m + 2):
        c = -math.comb(2 * m + 1, j) * (bernoulli(2 * m + 2 - j) + bernoulli(2 * m + 1 - j)) * Q(-1, 2) ** j
        out._acc(j, 1, SymbolicCoeff.rational(c))
    return out


def t23_power(m: int) -> LaurentLog:
    """Full zeta' contribution of the log-sum expansion, odd and even parts together."""
    out = LaurentLog()
    for k in range(2 * m + 2):
        out.add_poly([-c * math.comb(2 * m + 1, k) for c in _bneg(2 * m + 1 - k)], zeta_prime_symbolic(k))
    return out


def t24_power(m: int, N: int) -> LaurentLog:
    """Negative powers via the closed r-sum; nonnegative powers as in the direct form."""
    out = t24_symbolic(m, N).restrict(lambda j, p: j >= 0)
    for j in range(1 - N, 0):
        mj = -j
        c = Q(0)
        for q in range(2 * m + 2):
            s = sum((Q(math.comb(q + r, q), 2**r) for r in range(mj)), Q(0))
            inner = (1 - Q(1, 2 ** (q + 1)) * s) / (mj * math.comb(q + mj, mj))
            c += _t24_coefficient(m, j, q, inner)
        out._acc(j, 0, SymbolicCoeff.rational(c * Q(-1, 2) ** j))
    return out


def t_power_total(m: int, N: int) -> LaurentLog:
    return t1_power(m) + t3_power(m) + t21_power(m) + t22_power(m) + t23_power(m) + t24_power(m, N)


def bernoulli_total_full(m: int, N: int) -> LaurentLog:
    """Same sum as t_power_total, with T1 carrying 2 zeta' and the full zeta' group."""
    return t1_symbolic(m, 2) + t3_symbolic(m) + t21_symbolic(m) + t22_symbolic(m) + t23_power(m) + t24_symbolic(m, N)


# ---------------------------------------------------------------- closed-form reference coefficients


def leading_coefficient_2m(m: int) -> LaurentLog:
    """ell^{2m} part: (7 - 4m + (2+4m) log(ell^4/(2pi)^3) + 24(1+2m) zeta'(-1)) / (3 2^{2m+3})."""
    d = Q(1, 3 * 2 ** (2 * m + 3))
    c = SymbolicCoeff.rational(7 - 4 * m) + SymbolicCoeff.of(LOG2PI, -3 * (2 + 4 * m)) + SymbolicCoeff.of(
        zp_symbol(1), 24 * (1 + 2 * m)
    )
    return LaurentLog({(2 * m, 0): c * d, (2 * m, 1): SymbolicCoeff.rational(4 * (2 + 4 * m) * d)})


def next_coefficient_2m_minus_1(m: int) -> LaurentLog:
    d = Q(1, 3 * 2 ** (2 * m + 2))
    w = 8 * m * (1 + 2 * m)
    c = (
        SymbolicCoeff.rational(5 + 18 * m - 8 * m * m)
        + SymbolicCoeff.of(LOG2PI, Q(-w, 2))
        + SymbolicCoeff.of(zeta_pi_symbol(3), Q(-3 * w, 2))
        + SymbolicCoeff.of(zp_symbol(1), 6 * w)
    )
    return LaurentLog({(2 * m - 1, 0): c * d, (2 * m - 1, 1): SymbolicCoeff.rational(w * d)})


def next_coefficient_2m_minus_2(m: int) -> LaurentLog:
    d = Q(1, 2 ** (2 * m + 3))
    w = 4 * m * (4 * m * m - 1)
    c = (
        SymbolicCoeff.rational(Q(-87 - 121 * m + 840 * m * m - 152 * m**3, 135))
        + SymbolicCoeff.of(zeta_pi_symbol(3), -w)
        + SymbolicCoeff.of(zp_symbol(3), Q(8 * w, 3))
        + SymbolicCoeff.of(zp_symbol(1), Q(4 * w, 3))
    )
    return LaurentLog({(2 * m - 2, 0): c * d, (2 * m - 2, 1): SymbolicCoeff.rational(Q(4 * w, 45) * d)})


# ---------------------------------------------------------------- numerics


def _exact_mp(ell: int, m: int):
    """(T1 + T2 + T3 as mp, error, per-term dict)."""
    x = Q(-ell, 2)
    t1 = mpmath.mpf(0)
    err = mpmath.mpf(0)
    for k in range(m + 1):
        n = 2 * k + 1
        zp, ze = zeta_prime_neg_mp(n)
        w = mpq(math.comb(2 * m + 1, n) * bernoulli_poly(2 * m - 2 * k, x))
        t1 += (2 * zp - mpq(harmonic(n) * bernoulli(n + 1) / (n + 1))) * w
        err += 2 * ze * abs(w)
    t2 = mpmath.mpf(0)
    mag = mpmath.mpf(0)
    for k in range(2, ell + 2):
        term = mpq(bernoulli_poly(2 * m + 1, k + x)) * mpmath.log(k)
        t2 += term
        mag += abs(term)
    t3 = mpq(-bernoulli_poly(2 * m + 2, x) * (2 * harmonic(2 * m + 1) - harmonic(m)) / (2 * m + 2))
    total = t1 + t2 + t3
    err += (mag + abs(t1) + abs(t3)) * mpmath.mpf(10) ** (-mpmath.mp.dps + 5)
    return total, err, {"T1": t1, "T2": t2, "T3": t3}


def t_coeff_exact(ell: int, m: int, tol: float = 1e-10) -> BoundedValue:
    """T1 + T2 + T3 for integer ell >= -1."""
    if ell < -1:
        raise ValueError("ell must be at least -1")
    _check_m(m)
    with mpmath.workdps(_DPS):
        v, e, _ = _exact_mp(ell, m)
        x = float(v)
        b = float(e) + 2.0**-52 * abs(x)
    if b > tol and b > 1e-15 * abs(x):
        raise ToleranceUnreachable(f"bound {b} above tolerance {tol}")
    return BoundedValue(complex(x), b)


def t25_bound(ell, m: int, N: int) -> float:
    """Certified bound on the omitted zeta^R block of order ell^{-N}."""
    if N < 1:
        raise ValueError("N must be positive")
    zero = Angle.from_pi(0)
    n = 2 * m + 1
    total = 0.0
    for q in range(n + 1):
        for r in range(n + 1 - q):
            b = bernoulli(n - q - r)
            if not b:
                continue
            f = Q(math.factorial(n) * math.factorial(q - 1 + N), math.factorial(q) * math.factorial(n - q - r) * math.factorial(q + r + N))
            total += float(abs(f * b)) / 2**q * remainder_bound_C(zero, q + r + N, 2)
    return total * float(ell) ** (-N) * (1 + 1e-12)


def _asymptotic_mp(ell, m: int, N: int):
    val, err = _t_total_symbolic(m, N).evaluate_mp(ell)
    return val, err, t25_bound(ell, m, N)


def t_coeff_asymptotic(ell, m: int, N: int, tol: float = 1e-10) -> BoundedValue:
    """Truncated large-ell expansion of T(ell, m); the bound covers the omitted remainder."""
    if ell < 1 or N < 1:
        raise ValueError("need ell >= 1 and N >= 1")
    _check_m(m)
    with mpmath.workdps(_DPS):
        v, e, r = _asymptotic_mp(ell, m, N)
        x = float(v)
    return BoundedValue(complex(x), float(e) + r + 2.0**-52 * abs(x))


def t_coeff_gap(ell: int, m: int, N: int) -> tuple[float, float]:
    """(|exact - asymptotic|, certified bound), both computed in extended precision."""
    with mpmath.workdps(_DPS):
        ve, ee, _ = _exact_mp(ell, m)
        va, ea, r = _asymptotic_mp(ell, m, N)
        return float(abs(ve - va)), float(ee + ea) + r


def t_coeff_ledger(ell, m: int, N: int) -> dict[str, float]:
    """Numeric value of each expansion group at ell, plus the remainder bound."""
    out = {}
    with mpmath.workdps(_DPS):
        for name, part in t_terms_symbolic(m, N).items():
            out[name] = float(part.evaluate_mp(ell)[0])
    out["T25_bound"] = t25_bound(ell, m, N)
    return out


# ---------------------------------------------------------------- Chern polynomials


@dataclass
class ChernPoly:
    """Polynomial in named generators with coefficients in any ring supporting + and * Fraction.

    Monomials are exponent tuples aligned with ``gens``.  ``degrees`` gives the
    complex degree of each generator (c1 -> 1, c2 -> 2).
    """

    gens: tuple[str, ...] = ("c1", "c2")
    degrees: tuple[int, ...] = (1, 2)
    terms: dict = field(default_factory=dict)

    def _acc(self, mono: tuple, c):
        cur = self.terms.get(mono)
        new = c if cur is None else cur + c
        if _coeff_zero(new):
            self.terms.pop(mono, None)
        else:
            self.terms[mono] = new

    def copy(self) -> ChernPoly:
        return ChernPoly(self.gens, self.degrees, dict(self.terms))

    def __add__(self, other: ChernPoly) -> ChernPoly:
        out = self.copy()
        for mono, c in other.terms.items():
            out._acc(mono, c)
        return out

    def __mul__(self, other: ChernPoly) -> ChernPoly:
        out = ChernPoly(self.gens, self.degrees)
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                out._acc(tuple(i + j for i, j in zip(a, b)), _cmul(x, y))
        return out

    def scale(self, c) -> ChernPoly:
        out = ChernPoly(self.gens, self.degrees)
        for mono, x in self.terms.items():
            out._acc(mono, _cmul(x, c))
        return out

    def degree_of(self, mono: tuple) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def component(self, deg: int) -> ChernPoly:
        return ChernPoly(self.gens, self.degrees, {k: v for k, v in self.terms.items() if self.degree_of(k) == deg})

    def map_coeffs(self, f) -> ChernPoly:
        out = ChernPoly(self.gens, self.degrees)
        for mono, x in self.terms.items():
            out._acc(mono, f(x))
        return out

    def monomial_name(self, mono: tuple) -> str:
        parts = [g if e == 1 else f"{g}^{e}" for g, e in zip(self.gens, mono) if e]
        return "*".join(parts) or "1"

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: tuple(-e for e in kv[0]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChernPoly):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms


def _coeff_zero(c) -> bool:
    if isinstance(c, (LaurentLog, SymbolicCoeff)):
        return c.is_zero()
    if isinstance(c, BoundedValue):
        return False
    return c == 0


def _cmul(x, y):
    # rational scalars act on symbolic coefficients; symbolic times symbolic is not needed
    if isinstance(x, (LaurentLog, SymbolicCoeff, BoundedValue)):
        return x * y
    if isinstance(y, (LaurentLog, SymbolicCoeff, BoundedValue)):
        return y * x
    return x * y


def _base_gen(name: str, c=Q(1)) -> ChernPoly:
    idx = {"c1": (1, 0), "c2": (0, 1)}[name]
    return ChernPoly(terms={idx: c})


def discriminant_power(m: int, coeff=Q(1)) -> ChernPoly:
    """(c1^2 - 4 c2)^m."""
    out = ChernPoly()
    for i in range(m + 1):
        out._acc((2 * (m - i), i), Q(math.comb(m, i) * (-4) ** i) * coeff)
    return out


def _channel(n: int, m: int) -> ChernPoly:
    """c1^{n-2m} (c1^2 - 4c2)^m / ((n-2m)! (2m+1)!)."""
    f = Q(1, math.factorial(n - 2 * m) * math.factorial(2 * m + 1))
    out = ChernPoly()
    for mono, c in discriminant_power(m).terms.items():
        out._acc((mono[0] + n - 2 * m, mono[1]), c * f)
    return out


def assemble_torsion_form(n: int, mode: str = "symbolic", N: int = 6, ell=None, source: str = "asymptotic") -> ChernPoly:
    """Degree-2n component of the torsion form as a polynomial in c1(E), c2(E).

    symbolic: coefficients are LaurentLog expressions in ell (remainder omitted).
    numeric: coefficients are BoundedValues at the given ell; ``source`` picks the
    truncated expansion or the exact scalar sequence.
    """
    if not 0 <= n <= 8:
        raise ValueError("n must be in 0..8")
    if mode not in ("symbolic", "numeric"):
        raise ValueError("mode must be symbolic or numeric")
    out = ChernPoly()
    for m in range(n // 2 + 1):
        r = n - 2 * m
        ch = _channel(n, m)
        if mode == "symbolic":
            coeff = _t_total_symbolic(m, N).shift(r) * (2 * Q(-1, 2) ** r)
        else:
            if ell is None:
                raise ValueError("numeric mode needs ell")
            t = t_coeff_exact(ell, m) if source == "exact" else t_coeff_asymptotic(ell, m, N)
            coeff = t * (2 * (-ell / 2) ** r)
        for mono, c in ch.terms.items():
            out._acc(mono, _cmul(coeff, c))
    return out


def leading_torsion_form(n: int) -> ChernPoly:
    """The ell^{n+1} log, ell^{n+1} and ell^n parts of the degree-2n component in closed form."""
    out = ChernPoly()
    for m in range(n // 2 + 1):
        s = Q((-1) ** n)
        top = SymbolicCoeff.rational(Q(1, 2 ** (n + 1)))
        c = LaurentLog(
            {
                (n + 1, 1): top * s,
                (n + 1, 0): SymbolicCoeff.of(LOG2PI, -Q(1, 2 ** (n + 1))) * s,
                (n, 1): SymbolicCoeff.rational(Q(2 * (2 * m + 1), 3 * 2**n)) * s,
                (n, 0): (
                    SymbolicCoeff.rational(7 - 4 * m)
                    + SymbolicCoeff.of(LOG2PI, -6 * (2 * m + 1))
                    + SymbolicCoeff.of(zp_symbol(1), 24 * (2 * m + 1))
                )
                * (s / (3 * 2 ** (n + 2))),
            }
        )
        for mono, x in _channel(n, m).terms.items():
            out._acc(mono, c * x)
    return out


# ---------------------------------------------------------------- fiber ring and the leading-term identity

FIBER_GENS = ("u", "c1", "c2")  # u = c1 of the vertical tangent bundle
FIBER_DEGREES = (1, 1, 2)


def fiber_normal_form(p: ChernPoly) -> ChernPoly:
    """Rewrite u^2 -> c1^2 - 4 c2 until u appears at most linearly."""
    out = ChernPoly(FIBER_GENS, FIBER_DEGREES)
    for (a, b, c), x in p.terms.items():
        half, rest = divmod(a, 2)
        for mono, y in discriminant_power(half).terms.items():
            out._acc((rest, b + mono[0], c + mono[1]), _cmul(x, y))
    return out


def c1_O1() -> ChernPoly:
    """c1(O(1)) from pi^* c1(E) = u - 2 c1(O(1))."""
    return ChernPoly(FIBER_GENS, FIBER_DEGREES, {(1, 0, 0): Q(1, 2), (0, 1, 0): Q(-1, 2)})


def fiber_integral(p: ChernPoly) -> ChernPoly:
    """Integration over the fiber: u * pi^*x -> 2x and pi^*x -> 0."""
    p = fiber_normal_form(p)
    out = ChernPoly()
    for (a, b, c), x in p.terms.items():
        if a == 1:
            out._acc((b, c), _cmul(x, Q(2)))
    return out


def puchol_check(n: int, N: int = 6) -> tuple[bool, dict]:
    """Compare the ell^{n+1} part of the degree-2n torsion form with
    (ell^{n+1}/2) log(ell/2pi) times the fiber integral of c1(O(1))^{n+1}/(n+1)!.
    """
    if not 0 <= n <= 8:
        raise ValueError("n must be in 0..8")
    h = c1_O1()
    power = ChernPoly(FIBER_GENS, FIBER_DEGREES, {(0, 0, 0): Q(1)})
    for _ in range(n + 1):
        power = fiber_normal_form(power * h)
    integ = fiber_integral(power).scale(Q(1, math.factorial(n + 1)))
    factor = LaurentLog(
        {(n + 1, 1): SymbolicCoeff.rational(Q(1, 2)), (n + 1, 0): SymbolicCoeff.of(LOG2PI, Q(-1, 2))}
    )
    lhs = integ.map_coeffs(lambda x: factor * x)
    full = assemble_torsion_form(n, "symbolic", N)
    rhs = full.map_coeffs(lambda c: c.restrict(lambda j, p: j == n + 1))
    higher = [c for c in full.terms.values() if (c.top_degree() or 0) > n + 1]
    ok = lhs == rhs and not higher
    return ok, {"lhs": lhs, "rhs": rhs}
