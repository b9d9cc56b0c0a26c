"""Lerch zeta function Phi(z, s, v) = sum_k z^k (k+v)^(-s) at nonpositive integer s.

Values at s = -m come from a closed rational form in z. The s-derivative is
computed from its large-v expansion, which carries an explicit remainder bound,
or by a reference engine that shifts v far out and subtracts an exact partial
sum. Every floating result comes with a certified absolute error bound.

Internal arithmetic runs in mpmath at a working precision well above binary64,
so rounding contributes only a tiny term to the bounds.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .combinat import bernoulli, bernoulli_poly, faulhaber, harmonic

EULER_GAMMA = mpmath.mpf("0.5772156649015328606065120900824024310422")
LOG_SQRT_2PI = mpmath.mpf("0.9189385332046727417803297364056176398614")
# Gamma'(1)
DIGAMMA_ONE = -EULER_GAMMA

WORK_DPS = 40
_U = 2.0**-52
_ROUND = 2.0**-50


class ToleranceUnreachable(ArithmeticError):
    pass


def mpq(q):
    """Fraction to mpf at the current precision."""
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


# ---------------------------------------------------------------- angles


@dataclass(frozen=True)
class Angle:
    """A point e^{i phi} on the unit circle, phi normalized to (-pi, pi].

    ``pi_frac`` holds phi/pi when the angle is a known rational multiple of pi;
    it is authoritative for deciding phi == 0 and for reducing k*phi.
    """

    value: float
    pi_frac: Fraction | None = None

    @classmethod
    def from_pi(cls, frac) -> Angle:
        f = Fraction(frac)
        f = f - 2 * math.floor((f + 1) / 2)
        if f == -1:
            f = Fraction(1)
        # (-1, 1]
        if f <= -1:
            f += 2
        return cls(float(f) * math.pi, f)

    @classmethod
    def from_float(cls, x: float) -> Angle:
        if x == 0:
            return cls(0.0, Fraction(0))
        y = math.remainder(x, 2 * math.pi)
        if y <= -math.pi:
            y += 2 * math.pi
        return cls(y, None)

    @property
    def is_zero(self) -> bool:
        if self.pi_frac is not None:
            return self.pi_frac == 0
        return self.value == 0.0

    def __neg__(self) -> Angle:
        if self.pi_frac is not None:
            return Angle.from_pi(-self.pi_frac)
        return Angle.from_float(-self.value)

    def __add__(self, other: Angle) -> Angle:
        if self.pi_frac is not None and other.pi_frac is not None:
            return Angle.from_pi(self.pi_frac + other.pi_frac)
        return Angle.from_float(self.value + other.value)

    def times(self, k: int) -> Angle:
        if self.pi_frac is not None:
            return Angle.from_pi(self.pi_frac * k)
        return Angle.from_float(self.value * k)

    def mp_unit(self, k: int = 1):
        """e^{i k phi} as an mpmath complex at the current precision."""
        if self.pi_frac is not None:
            f = self.pi_frac * k
            f = f - 2 * math.floor(f / 2)
            x = mpmath.mpf(f.numerator) / f.denominator
            return mpmath.mpc(mpmath.cospi(x), mpmath.sinpi(x))
        return mpmath.expj(k * mpmath.mpf(self.value))

    def unit(self, k: int = 1) -> complex:
        with mpmath.workdps(30):
            return complex(self.mp_unit(k))

    @property
    def abs_value(self) -> float:
        return abs(self.value)


def as_angle(z) -> Angle:
    if isinstance(z, Angle):
        return z
    return Angle.from_float(float(z))


# ---------------------------------------------------------------- bounded values


@dataclass(frozen=True)
class BoundedValue:
    """A complex value with a certified bound on its absolute error."""

    value: complex
    bound: float

    def __post_init__(self):
        if not self.bound >= 0:
            raise ValueError("bound must be nonnegative")

    @staticmethod
    def _lift(x) -> BoundedValue:
        if isinstance(x, BoundedValue):
            return x
        return BoundedValue(complex(x), 0.0)

    def __add__(self, other) -> BoundedValue:
        o = self._lift(other)
        r = self.value + o.value
        return BoundedValue(r, self.bound + o.bound + _ROUND * abs(r))

    __radd__ = __add__

    def __neg__(self) -> BoundedValue:
        return BoundedValue(-self.value, self.bound)

    def __sub__(self, other) -> BoundedValue:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> BoundedValue:
        return self._lift(other) + (-self)

    def __mul__(self, other) -> BoundedValue:
        o = self._lift(other)
        r = self.value * o.value
        b = abs(self.value) * o.bound + abs(o.value) * self.bound + self.bound * o.bound
        return BoundedValue(r, b + _ROUND * abs(r))

    __rmul__ = __mul__

    @property
    def real(self) -> float:
        return self.value.real

    def contains(self, x, slack: float = 0.0) -> bool:
        return abs(complex(x) - self.value) <= self.bound + slack


# ---------------------------------------------------------------- Phi at s = -m


@lru_cache(maxsize=None)
def _phi_numerator(m: int, a: int) -> tuple[int, ...]:
    """Integer coefficients of P with Phi(z, -m, a) = P(z) / (1 - z)^(m+1)."""
    if m == 0:
        return (1,)
    p = list(_phi_numerator(m - 1, a))
    # Phi_{m} = a Phi_{m-1} + z Phi_{m-1}'
    q = [a * c for c in p]
    for i in range(1, len(p)):
        q[i] += i * p[i]
    out = [0] * (len(p) + 1)
    for i, c in enumerate(q):
        out[i] += c
        out[i + 1] -= c
    for i, c in enumerate(p):
        out[i + 1] += m * c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def _mp_phi_neg_int(z: Angle, m: int, a: int):
    if z.is_zero:
        return mpq(-bernoulli_poly(m + 1, a) / (m + 1))
    zz = z.mp_unit()
    acc = mpmath.mpc(0)
    for c in reversed(_phi_numerator(m, a)):
        acc = acc * zz + c
    return acc / (1 - zz) ** (m + 1)


def phi_neg_int(z, m: int, a: int) -> complex:
    """Phi(z, -m, a) for integer m >= 0 and a >= 0 (0^0 read as 1)."""
    z = as_angle(z)
    if m < 0 or a < 0:
        raise ValueError("m and a must be nonnegative")
    with mpmath.workdps(WORK_DPS + m):
        return complex(_mp_phi_neg_int(z, m, a))


def phi_neg_int_poly(m: int, a: int) -> tuple[int, ...]:
    return _phi_numerator(m, a)


# ---------------------------------------------------------------- Hurwitz zeta


def _hurwitz_mp(s, a, M: int | None = None, p: int = 12):
    s = mpmath.mpf(s)
    a = mpmath.mpf(a)
    if M is None:
        M = max(10, int(math.ceil(float(s)))) + 10
    total = mpmath.fsum((k + a) ** (-s) for k in range(M))
    x = M + a
    total += x ** (1 - s) / (s - 1) + x ** (-s) / 2
    poch = s  # (s)_{2j-1}
    last = mpmath.mpf(0)
    for j in range(1, p + 2):
        if j > 1:
            poch *= (s + 2 * j - 3) * (s + 2 * j - 2)
        b = bernoulli(2 * j)
        term = mpq(b) / mpmath.factorial(2 * j) * poch * x ** (-s - 2 * j + 1)
        if j <= p:
            total += term
        else:
            last = abs(term)
    return total, 2 * last


def hurwitz_zeta(s: float, a: float) -> BoundedValue:
    """zeta(s, a) = sum_{m>=0} (m+a)^(-s) for real s > 1, a > 0."""
    if not s > 1:
        raise ValueError("hurwitz_zeta needs s > 1")
    if not a > 0:
        raise ValueError("hurwitz_zeta needs a > 0")
    with mpmath.workdps(WORK_DPS):
        v, r = _hurwitz_mp(s, a)
        val = float(v)
        return BoundedValue(complex(val), float(r) + 2 * _U * abs(val))


def riemann_zeta(s: float) -> BoundedValue:
    return hurwitz_zeta(s, 1)


# ---------------------------------------------------------------- remainder bound


def remainder_bound_C(z, N: int, a: int) -> float:
    """Upper bound C(z, -N, a) for the remainder constant of the large-v expansion."""
    z = as_angle(z)
    if N < 1:
        raise ValueError("N must be positive")
    fa = faulhaber(a, N)
    with mpmath.workdps(WORK_DPS):
        if z.is_zero:
            zs = hurwitz_zeta(N + 1, 1)
            main = mpmath.factorial(N) * 2 * (zs.value.real + zs.bound) / (2 * mpmath.pi) ** (N + 1)
        else:
            if z.pi_frac is not None:
                x = abs(z.pi_frac) / 2
                t = mpmath.mpf(x.numerator) / x.denominator
            else:
                t = mpmath.mpf(abs(z.value)) / (2 * mpmath.pi)
            z1 = hurwitz_zeta(N + 1, t)
            z2 = hurwitz_zeta(N + 1, 1 - t)
            zsum = z1.value.real + z1.bound + z2.value.real + z2.bound
            main = mpmath.factorial(N) / (2 * mpmath.pi) ** (N + 1) * zsum
        c = float(main + fa)
    return c * (1 + 1e-12) + 1e-300


# ---------------------------------------------------------------- derivative expansion


def _comb(n: int, k: int) -> int:
    return math.comb(n, k)


def _mp_sderiv_asymptotic(z: Angle, n: int, v, a: int, N: int):
    """Truncated expansion of dPhi/ds(z, -n, v+a) and its remainder bound (mp values)."""
    v = mpmath.mpf(v)
    logv = mpmath.log(v)
    Hn = harmonic(n)
    total = mpmath.mpc(0)
    absum = mpmath.mpf(0)
    for m in range(n + 1):
        coef = mpq(harmonic(m) - Hn)
        t = v**m * _comb(n, m) * _mp_phi_neg_int(z, n - m, a) * (-logv + coef)
        total += t
        absum += abs(t)
    for m in range(1, N):
        t = _mp_phi_neg_int(z, m + n, a) / ((-v) ** m * m * _comb(m + n, n))
        total += t
        absum += abs(t)
    if z.is_zero:
        t = v ** (n + 1) * (logv / (n + 1) - mpmath.mpf(1) / (n + 1) ** 2)
        total += t
        absum += abs(t)
    rem = mpmath.mpf(remainder_bound_C(z, N + n, a)) / (v**N * N * _comb(N + n, n))
    return total, rem, absum


def lerch_sderiv_asymptotic(z, n: int, v: float, a: int, N: int) -> BoundedValue:
    """dPhi/ds(z, -n, v + a) from the large-v expansion truncated before order N."""
    z = as_angle(z)
    if n < 0 or a < 0:
        raise ValueError("n and a must be nonnegative")
    if N < 1:
        raise ValueError("N must be positive")
    if not v >= 1:
        raise ValueError("v must be at least 1")
    with mpmath.workdps(WORK_DPS + N + n):
        total, rem, absum = _mp_sderiv_asymptotic(z, n, v, a, N)
        val = complex(total)
        err = float(rem) + float(absum) * 10.0 ** (-WORK_DPS + 5) + 2 * _U * abs(val)
    return BoundedValue(val, err)


def asymptotic_log_coefficient(z, n: int, v: float, a: int) -> complex:
    """Coefficient of log v in the expansion, summed over all its terms."""
    z = as_angle(z)
    with mpmath.workdps(WORK_DPS + n):
        c = mpmath.mpc(0)
        for m in range(n + 1):
            c -= mpmath.mpf(v) ** m * _comb(n, m) * _mp_phi_neg_int(z, n - m, a)
        if z.is_zero:
            c += mpmath.mpf(v) ** (n + 1) / (n + 1)
        return complex(c)


def predicted_bound(z, n: int, V: float, N: int, a: int = 1) -> float:
    z = as_angle(z)
    return remainder_bound_C(z, N + n, a) / (V**N * N * _comb(N + n, n))


def _choose_cutoff(z: Angle, n: int, v0: int, tol: float) -> tuple[int, int]:
    target = tol / 4
    V = max(v0, 4)
    while V <= 10**6:
        best = None
        for N in range(1, 31):
            b = predicted_bound(z, n, V, N)
            if best is None or b < best[0]:
                best = (b, N)
        if best[0] <= target:
            return V, best[1]
        V *= 2
    raise ToleranceUnreachable(f"tolerance {tol} unreachable for n={n}, phi={z.value}")


def _mp_sderiv_reference(z: Angle, n: int, v0: int, tol: float):
    V, N = _choose_cutoff(z, n, v0, tol)
    # dPhi/ds(z,-n,v0) = z^L dPhi/ds(z,-n,v0+L) - sum_{k<L} z^k (v0+k)^n log(v0+k)
    L = V + 1 - v0
    far, rem, absum = _mp_sderiv_asymptotic(z, n, V, 1, N)
    val = z.mp_unit(L) * far
    part = mpmath.mpc(0)
    pabs = mpmath.mpf(0)
    for k in range(L):
        if v0 + k == 1:
            continue
        t = z.mp_unit(k) * mpmath.mpf(v0 + k) ** n * mpmath.log(v0 + k)
        part += t
        pabs += abs(t)
    val -= part
    err = rem + (absum + pabs) * mpmath.mpf(10) ** (-mpmath.mp.dps + 5)
    return val, err, (V, N)


def lerch_sderiv_reference(z, n: int, v0: int, tol: float) -> BoundedValue:
    """dPhi/ds(z, -n, v0) with certified error at most tol."""
    z = as_angle(z)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if v0 < 1:
        raise ValueError("v0 must be a positive integer")
    return _sderiv_reference_cached(z, n, v0, tol)


@lru_cache(maxsize=4096)
def _sderiv_reference_cached(z: Angle, n: int, v0: int, tol: float) -> BoundedValue:
    with mpmath.workdps(WORK_DPS + n + 30):
        val, err, _ = _mp_sderiv_reference(z, n, v0, tol)
        out = complex(val)
        err = float(err)
    # the final conversion to binary64 may add an ulp beyond tol on large values
    if err > tol:
        raise ToleranceUnreachable(f"bound {err} exceeds tolerance {tol}")
    return BoundedValue(out, err + 2 * _U * abs(out))


def zeta_prime_neg(n: int, tol: float = 1e-12) -> BoundedValue:
    """zeta'(-n) = dPhi/ds(1, -n, 1)."""
    return lerch_sderiv_reference(Angle.from_pi(0), n, 1, tol)


@lru_cache(maxsize=256)
def zeta_prime_neg_mp(n: int, tol: float = 1e-40):
    """zeta'(-n) as an mp number with its certified error, for sums with large cancellation."""
    with mpmath.workdps(WORK_DPS + n + 30):
        val, err, _ = _mp_sderiv_reference(Angle.from_pi(0), n, 1, tol)
        return mpmath.re(val), mpmath.mpf(err)


# ---------------------------------------------------------------- digamma


def digamma(x: float) -> float:
    """psi(x) for real x > 0 via upward recurrence and the asymptotic series."""
    if not x > 0:
        raise ValueError("digamma implemented for x > 0")
    with mpmath.workdps(30):
        x = mpmath.mpf(x)
        acc = mpmath.mpf(0)
        while x < 20:
            acc -= 1 / x
            x += 1
        s = mpmath.log(x) - 1 / (2 * x)
        x2 = x * x
        xp = x2
        for k in range(1, 12):
            b = bernoulli(2 * k)
            s -= mpq(b) / (2 * k * xp)
            xp *= x2
        return float(acc + s)


def digamma_and_rrot(phi: float) -> tuple[float, float]:
    """((psi(phi/2pi) + psi(1 - phi/2pi))/4, Im(e^{i phi} dPhi/ds(e^{i phi}, 0, 1)))."""
    if not 0 < phi < 2 * math.pi:
        raise ValueError("phi must lie in (0, 2pi)")
    t = phi / (2 * math.pi)
    psi_half_sum = (digamma(t) + digamma(1 - t)) / 4
    z = Angle.from_float(phi)
    d = lerch_sderiv_reference(z, 0, 1, 1e-10)
    rrot = (cmath.exp(1j * phi) * d.value).imag
    return psi_half_sum, rrot


def rrot_real_part(phi: float) -> float:
    """(-log 2pi + Gamma'(1))/2 - (psi(phi/2pi) + psi(1 - phi/2pi))/4."""
    ps, _ = digamma_and_rrot(phi)
    return float(-LOG_SQRT_2PI + DIGAMMA_ONE / 2) - ps
