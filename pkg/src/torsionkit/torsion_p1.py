"""Equivariant torsion of O(ell) on the projective line.

Two actions are covered: a rotation by a fixed angle phi (exact value and
large-ell expansion), and the infinitesimal action of a circle generator
with parameter t, |t| < 2 pi (convergent series, large-ell expansion and a
quadrature oracle for the oscillatory part).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from scipy import integrate

from .combinat import bernoulli, bernoulli_poly, harmonic
from .exppoly import AsymptoticValue, AsymTerm, collect
from .lerch import (
    DIGAMMA_ONE,
    WORK_DPS,
    Angle,
    BoundedValue,
    _mp_phi_neg_int,
    digamma,
    lerch_sderiv_reference,
    mpq,
    remainder_bound_C,
    zeta_prime_neg,
)

_U = 2.0**-52


@dataclass(frozen=True)
class P1Input:
    """Rotation angle phi = phi_pi * pi (or a float ``phi``) in (0, 2 pi); x0 is alpha^vee(X0)."""

    ell: int
    phi_pi: Fraction | None = None
    phi: float | None = None
    x0: Fraction = Fraction(1)
    N: int = 10
    tol: float = 1e-13

    def __post_init__(self):
        if (self.phi_pi is None) == (self.phi is None):
            raise ValueError("give exactly one of phi_pi and phi")
        val = float(self.phi_pi) * math.pi if self.phi_pi is not None else self.phi
        if not 0 < val < 2 * math.pi:
            raise ValueError("phi must lie in (0, 2 pi)")
        if Fraction(self.x0) <= 0:
            raise ValueError("x0 must be positive")

    @property
    def exact_angle(self) -> bool:
        return self.phi_pi is not None

    def angle(self) -> Angle:
        return Angle.from_pi(Fraction(self.phi_pi)) if self.phi_pi is not None else Angle.from_float(self.phi)

    def half(self) -> Angle:
        """phi / 2, which is not reduced modulo 2 pi."""
        if self.phi_pi is not None:
            return Angle.from_pi(Fraction(self.phi_pi) / 2)
        return Angle.from_float(self.phi / 2)

    def mp_phi(self):
        return mpq(Fraction(self.phi_pi)) * mpmath.pi if self.phi_pi is not None else mpmath.mpf(self.phi)


def _zeta_prime_exp(ang: Angle, tol: float):
    """e^{i phi} dPhi/ds(e^{i phi}, 0, 1) with its bound."""
    d = lerch_sderiv_reference(ang, 0, 1, tol)
    with mpmath.workdps(WORK_DPS):
        u = ang.mp_unit()
        return u * mpmath.mpc(d.value), d.bound


def p1_exact(inp: P1Input) -> BoundedValue:
    """Closed-form torsion for any integer ell; real up to the certified bound."""
    L = abs(inp.ell + 1)
    ang = inp.angle()
    with mpmath.workdps(WORK_DPS):
        phi = inp.mp_phi()
        s = mpmath.sin(phi / 2)
        zp, e1 = _zeta_prime_exp(ang, inp.tol / 4)
        zm, e2 = _zeta_prime_exp(-ang, inp.tol / 4)
        pre = mpmath.cos(L * phi / 2) / (1j * s)
        total = pre * (zp - zm)
        total -= mpmath.fsum(mpmath.sin((L - 2 * k) * phi / 2) / s * mpmath.log(k) for k in range(2, L + 1))
        total += mpmath.cos((inp.ell + 2) * phi / 2) / (2 * s**2) * mpmath.log(mpq(Fraction(inp.x0)))
        err = float(abs(pre)) * (e1 + e2)
        value = complex(total)
    bound = err + 2 * _U * abs(value) + 1e-25
    return BoundedValue(complex(value.real, 0.0), bound + abs(value.imag))


def p1_remainder_bound(inp: P1Input, M: int = 1) -> float:
    """Remainder bound of the rotation expansion; M is the normalizing factor, taken as 1."""
    ang = inp.angle()
    s = abs(math.sin(float(inp.mp_phi()) / 2))
    return remainder_bound_C(ang, inp.N, 2) / (inp.ell**inp.N * M * s) * (1 + 1e-12)


def p1_asymptotic(inp: P1Input) -> AsymptoticValue:
    """Large-ell expansion in the variable ell with oscillating phases e^{+-i ell phi/2}."""
    if inp.ell < 1:
        raise ValueError("the expansion needs ell >= 1")
    N = inp.N
    half = inp.half()
    ang = inp.angle()
    terms: list[AsymTerm] = []
    ledger: dict[str, list] = {}
    with mpmath.workdps(WORK_DPS + N):
        phi = inp.mp_phi()
        s = mpmath.sin(phi / 2)
        e = lambda j: mpmath.expj(j * phi / 2)  # noqa: E731
        logx0 = mpmath.log(mpq(Fraction(inp.x0)))
        # cos((ell+2) phi/2) / (-2 sin^2) log ell and its metric companion
        g_log = [AsymTerm(e(2 * sg) / (-4 * s**2), 0, 1, half if sg > 0 else -half) for sg in (1, -1)]
        g_x0 = [AsymTerm(e(2 * sg) * logx0 / (4 * s**2), 0, 0, half if sg > 0 else -half) for sg in (1, -1)]
        # Im part of zeta'(e^{ik phi}) and the digamma form of its real part
        zp, zerr = _zeta_prime_exp(ang, inp.tol)
        rrot = mpmath.im(zp)
        t = float(phi / (2 * mpmath.pi))
        real_part = -mpmath.log(2 * mpmath.pi) + DIGAMMA_ONE - (mpmath.mpf(digamma(t)) + mpmath.mpf(digamma(1 - t))) / 2
        g_rot = [AsymTerm(e(sg) * rrot / (2 * s), 0, 0, half if sg > 0 else -half) for sg in (1, -1)]
        g_psi = [AsymTerm(sg * e(sg) * real_part / (4j * s), 0, 0, half if sg > 0 else -half) for sg in (1, -1)]
        g_mid = []
        for m in range(1, N):
            for sg in (1, -1):
                a = ang if sg > 0 else -ang
                c = sg * e(3 * sg) * _mp_phi_neg_int(a, m, 2) / (2j * s * (-1) ** m * m)
                g_mid.append(AsymTerm(c, -m, 0, half if sg > 0 else -half))
        for name, g in (("log", g_log), ("metric", g_x0), ("rrot", g_rot), ("digamma", g_psi), ("middle", g_mid)):
            ledger[name] = g
            terms += g
        # the real part enters through digamma; charge its distance to the certified value
        cerr = float(abs(mpmath.re(zp) - real_part / 2)) * 2 + zerr
        cerr = cerr * float(1 / abs(s))
    return AsymptoticValue(collect(terms), inp.ell, p1_remainder_bound(inp), cerr, ledger=ledger)


# ---------------------------------------------------------------- Lie-parameter torsion


def _check_t(t: float):
    if not 0 < abs(t) < 2 * math.pi:
        raise ValueError("need 0 < |t| < 2 pi")


def sharp_coefficient(ell: int, m: int) -> Fraction:
    """t^{2m} coefficient of (cos((ell+1)t/2) / (t sin(t/2)))^#, m >= 0."""
    b = bernoulli_poly(2 * m + 2, Fraction(-ell, 2))
    c = 2 * (-1) ** (m + 1) * b / math.factorial(2 * m + 2)
    return c * (2 * harmonic(2 * m + 1) - harmonic(m))


def _zeta_odd_coefficient(k: int, tol: float):
    """2 zeta'(-k) + H_k zeta(-k) for odd k, with bound."""
    d = zeta_prime_neg(k, tol)
    zeta_neg = -bernoulli(k + 1) / (k + 1)
    with mpmath.workdps(WORK_DPS):
        return 2 * mpmath.mpf(d.value.real) + mpq(harmonic(k) * zeta_neg), 2 * d.bound


def _geometric_tail(term, k0: int, q: float, step: int = 1) -> float:
    """Sum of term(k) for k >= k0 when term(k+step)/term(k) <= q(1 + 2/k) eventually.

    Terms are summed directly for a while, then closed with a geometric series.
    """
    total = 0.0
    k = k0
    while True:
        r = q * (1 + 2 / k)
        if r < 0.9 and k > k0 + 50:
            return (total + term(k) / (1 - r)) * (1 + 1e-12)
        total += term(k)
        k += step


def lie_series(ell: int, t: float, K: int = 60, tol: float = 1e-14) -> BoundedValue:
    """Lie-parameter torsion through order t^{2K}, with a tail bound for the rest."""
    _check_t(t)
    if K > 400:
        raise ValueError("K above 400 is not supported")
    parts = lie_series_parts(ell, t, K, tol)
    return parts["total"]


def lie_series_parts(ell: int, t: float, K: int = 60, tol: float = 1e-14) -> dict:
    """The three summands (zeta', finite log sum, sharp) and their sum."""
    _check_t(t)
    L = abs(ell + 1)
    q = (t / (2 * math.pi)) ** 2
    with mpmath.workdps(WORK_DPS + 20):
        tm = mpmath.mpf(t)
        s = mpmath.sin(tm / 2)
        pre = -mpmath.cos((ell + 1) * tm / 2) / s
        zsum, zerr = _zeta_series_constant(t, tol, K)
        z_part = pre * zsum
        z_bound = float(abs(pre)) * zerr

        log_part = mpmath.fsum(mpmath.sin((2 * k - L) * tm / 2) / s * mpmath.log(k) for k in range(2, L + 1))

        sharp = mpmath.fsum(mpq(sharp_coefficient(ell, m)) * tm ** (2 * m) for m in range(K + 1))
        x = abs(ell) / 2 + 1

        def sterm(m):
            n = 2 * m + 2
            # |B_n(x)|/n! <= 4 (2 pi)^{-n} sum_{i<=n} (2 pi x)^i / i!, capped by the exponential
            bn = 4 * (2 * math.pi) ** (-n) * math.exp(2 * math.pi * x)
            return 2 * bn * (2 * (1 + math.log(n)) + 1) * abs(t) ** (2 * m)

        s_bound = _geometric_tail(sterm, K + 1, q)
        total = z_part + log_part + sharp
        value = float(mpmath.re(total))
    b = z_bound + s_bound + 4 * _U * abs(value) + 1e-25
    return {
        "zeta_prime": BoundedValue(complex(float(z_part)), z_bound),
        "log_sum": BoundedValue(complex(float(log_part)), 2 * _U * abs(float(log_part))),
        "sharp": BoundedValue(complex(float(sharp)), s_bound),
        "total": BoundedValue(complex(value), b),
    }


def lie_series_coefficients(ell: int, M: int, tol: float = 1e-14) -> list:
    """t^{2m} coefficients (m <= M) of the full Lie-parameter torsion as mp numbers."""
    with mpmath.workdps(WORK_DPS):
        L = abs(ell + 1)
        deg = 2 * M + 2
        # t / sin(t/2) as a power series, by inverting sin(t/2)/t
        st = [Fraction(0)] * (deg + 1)
        for n in range(0, deg + 1, 2):
            st[n] = Fraction((-1) ** (n // 2), 2 ** (n + 1) * math.factorial(n + 1))
        inv = _series_inverse(st, deg)

        def trig(a: Fraction, kind: str):
            # cos(a t) or sin(a t)/t
            out = [Fraction(0)] * (deg + 1)
            for n in range(deg + 1):
                if kind == "cos" and n % 2 == 0:
                    out[n] = (-1) ** (n // 2) * a**n / math.factorial(n)
                if kind == "sinc" and n % 2 == 0:
                    out[n] = (-1) ** (n // 2) * a ** (n + 1) / math.factorial(n + 1)
            return out

        # zeta' summand: -[t cos/sin] * sum c_k t^{k-1}
        cs = _series_mul(trig(Fraction(ell + 1, 2), "cos"), inv, deg)
        zc = [mpmath.mpf(0)] * (deg + 1)
        for k in range(1, deg + 2, 2):
            c, _ = _zeta_odd_coefficient(k, tol)
            if k - 1 <= deg:
                zc[k - 1] = c * (-1) ** ((k + 1) // 2) / mpmath.factorial(k)
        z_series = [-sum(mpq(cs[i]) * zc[n - i] for i in range(n + 1)) for n in range(deg + 1)]
        # finite log sum: sum_k log k * [sin((2k-L)t/2)/t] * [t/sin(t/2)]
        log_series = [mpmath.mpf(0)] * (deg + 1)
        for k in range(2, L + 1):
            ser = _series_mul(trig(Fraction(2 * k - L, 2), "sinc"), inv, deg)
            lk = mpmath.log(k)
            for n in range(deg + 1):
                log_series[n] += mpq(ser[n]) * lk
        return [z_series[2 * m] + log_series[2 * m] + mpq(sharp_coefficient(ell, m)) for m in range(M + 1)]


def _series_inverse(a: list, deg: int) -> list:
    out = [Fraction(0)] * (deg + 1)
    out[0] = 1 / a[0]
    for n in range(1, deg + 1):
        out[n] = -sum((a[i] * out[n - i] for i in range(1, n + 1)), Fraction(0)) / a[0]
    return out


def _series_mul(a: list, b: list, deg: int) -> list:
    return [sum((a[i] * b[n - i] for i in range(n + 1)), Fraction(0)) for n in range(deg + 1)]


# ---------------------------------------------------------------- oscillatory part


def f_aux(r: float, t: float) -> float:
    """(r / sin(tr/2) - 1 / sin(t/2)) / (t (1 - r^2)), continuous at r = +-1 and r = 0."""
    if abs(abs(r) - 1) < 1e-4:
        u = abs(r) - 1
        c = _f_taylor_at_one(t, 4)
        return float(sum(ck * u**k for k, ck in enumerate(c)))
    if r == 0:
        return (2 / t - 1 / math.sin(t / 2)) / t
    return (r / math.sin(t * r / 2) - 1 / math.sin(t / 2)) / (t * (1 - r * r))


def _f_coeff(p: int, t: float) -> float:
    return (-1) ** p * 4 * p * math.pi / (4 * p * p * math.pi**2 - t * t)


@lru_cache(maxsize=256)
def _f_taylor_at_one(t: float, n: int) -> tuple:
    """Taylor coefficients of f at r = 1 up to degree n, by power-series arithmetic in u = r - 1."""
    with mpmath.workdps(WORK_DPS + 2 * n):
        tm = mpmath.mpf(t)
        a = tm / 2
        deg = n + 2
        # sin(a + a u) = sin a cos(a u) + cos a sin(a u)
        sn = [(mpmath.sin(a) if k % 2 == 0 else mpmath.cos(a)) * (-1) ** (k // 2) * a**k / mpmath.factorial(k)
              for k in range(deg + 1)]
        inv = [1 / sn[0]] + [mpmath.mpf(0)] * deg
        for k in range(1, deg + 1):
            inv[k] = -mpmath.fsum(sn[i] * inv[k - i] for i in range(1, k + 1)) / sn[0]
        g = [inv[k] + (inv[k - 1] if k else 0) for k in range(deg + 1)]  # (1+u)/sin
        h = g[1:]  # (g(1+u) - g(1)) / u
        # f = -h / (t (2 + u))
        q = [mpmath.mpf(0)] * len(h)
        for k in range(len(h)):
            q[k] = (h[k] - (q[k - 1] if k else 0)) / 2
        return tuple(-x / tm for x in q[: n + 1])


def f_derivative_at_one(m: int, t: float) -> float:
    """f^{(m-1)}(1)."""
    c = _f_taylor_at_one(t, m - 1)
    return float(c[m - 1] * mpmath.factorial(m - 1))


def f_derivative_series(m: int, t: float, P: int = 200000) -> float:
    """f^{(m-1)}(1) from the partial-fraction series over p, truncated at P (for cross-checks)."""
    total = 0.0
    for p in range(1, P + 1):
        a = 2 * p * math.pi
        total += _f_coeff(p, t) * (1 / (a - t) ** m - 1 / (-a - t) ** m)
    return math.factorial(m - 1) * t ** (m - 1) * total


def _f_tail(p0: int, t: float, d: int) -> float:
    """Bound on sum_{p >= p0} |c_p| * 2 / (2 p pi - |t|)^{d+1}."""
    # |c_p| <= 2 / (2 p pi - |t|), then compare with an integral
    a = 2 * p0 * math.pi - abs(t)
    return 4 / a ** (d + 2) + 4 / (2 * math.pi * (d + 1) * a ** (d + 1))


def f_derivative_sup(d: int, t: float) -> float:
    """Bound on sup_{|r|<=1} |f^{(d)}(r)|."""
    tt = abs(t)
    total = 0.0
    p = 1
    while p < 60:
        a = 2 * p * math.pi - tt
        total += abs(_f_coeff(p, t)) * 2 / a ** (d + 1)
        p += 1
    return math.factorial(d) * tt**d * (total + _f_tail(p, t, d)) * (1 + 1e-12)


def oscillatory_integral_oracle(ell: int, t: float, quad_tol: float = 1e-11) -> float:
    """(cos(Lt/2) / (t sin(t/2)))^# by adaptive quadrature, L = |ell + 1|."""
    _check_t(t)
    L = abs(ell + 1)
    c1 = math.cos(L * t / 2) / math.sin(t / 2)

    def g(r):
        if abs(abs(r) - 1) < 1e-6:
            # removable singularity: derivative of r cos(Ltr/2)/sin(tr/2) at r = 1, folded by symmetry
            h = _h_prime(1.0, L, t)
            return h / (2 * t)
        if r == 0:
            return (2 / t - c1) / t
        return (r * math.cos(L * t * r / 2) / math.sin(t * r / 2) - c1) / (t * (1 - r * r))

    return -_oscillatory_quad(g, L, t, quad_tol)


def _h_prime(r: float, L: int, t: float) -> float:
    x = t * r / 2
    return (math.cos(L * x) / math.sin(x) - r * (L * t / 2) * math.sin(L * x) / math.sin(x)
            - r * math.cos(L * x) * (t / 2) * math.cos(x) / math.sin(x) ** 2)


def _oscillatory_quad(g, L: int, t: float, quad_tol: float) -> float:
    # split [-1, 1] at the oscillation scale 4 pi / (L t)
    width = 4 * math.pi / max(L * abs(t), 1e-300)
    pieces = max(2, min(4000, math.ceil(2 / width)))
    if pieces % 2:
        pieces += 1
    edges = [-1 + 2 * i / pieces for i in range(pieces + 1)]
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        v, err = integrate.quad(g, a, b, epsabs=quad_tol / pieces, epsrel=0, limit=200)
        if not math.isfinite(v) or err > 10 * quad_tol / pieces + 1e-14:
            raise ArithmeticError("quadrature did not converge")
        total += v
    return total


def cos_f_integral(ell: int, t: float, quad_tol: float = 1e-11) -> float:
    """-int_{-1}^{1} cos(L t r / 2) f(r) dr."""
    L = abs(ell + 1)
    return -_oscillatory_quad(lambda r: math.cos(L * t * r / 2) * f_aux(r, t), L, t, quad_tol)


def sici(x: float) -> tuple[float, float, float]:
    """(Si(x), Ci(x), bound) for x > 0: Maclaurin series up to 30, asymptotic series beyond."""
    if x <= 0:
        raise ValueError("x must be positive")
    if x <= 30:
        with mpmath.workdps(60):
            si, ci = _sici_series(mpmath.mpf(x))
            return float(si), float(ci), 1e-15 * (1 + abs(float(ci)))
    fa, fb, err = _aux_fg(x)
    si = math.pi / 2 - fa * math.cos(x) - fb * math.sin(x)
    ci = fa * math.sin(x) - fb * math.cos(x)
    return si, ci, err + 4 * _U * (1 + abs(si) + abs(ci))


def _sici_series(xm):
    """Maclaurin series of Si and Ci - gamma - log x, summed at 60 digits."""
    si = mpmath.mpf(0)
    ci = mpmath.mpf(0)
    term = xm  # x^j / j!
    j = 1
    while True:
        if j % 2:
            si += (-1) ** (j // 2) * term / j
        else:
            ci += (-1) ** (j // 2) * term / j
        if j > xm and abs(term) < mpmath.mpf(10) ** -45:
            break
        j += 1
        term = term * xm / j
    return si, ci - DIGAMMA_ONE + mpmath.log(xm)


def _aux_fg(x: float) -> tuple[float, float, float]:
    """Auxiliary functions f, g by their asymptotic series; the error is below the first omitted terms."""
    fa = 0.0
    fb = 0.0
    m = 0
    tf = 1 / x  # (2m)!/x^{2m+1}
    tg = 1 / x**2  # (2m+1)!/x^{2m+2}
    while True:
        nf = tf * (2 * m + 1) * (2 * m + 2) / x**2
        ng = tg * (2 * m + 2) * (2 * m + 3) / x**2
        fa += (-1) ** m * tf
        fb += (-1) ** m * tg
        if nf >= tf or ng >= tg or nf < 1e-18 * abs(fa):
            return fa, fb, nf + ng
        tf, tg = nf, ng
        m += 1


def sharp_decomposition(ell: int, t: float, quad_tol: float = 1e-11) -> dict:
    """The sharp term split into the f-integral and the Si/Ci part."""
    L = abs(ell + 1)
    x = L * t
    si, ci, _ = sici(x)
    s = math.sin(t / 2)
    trig = -(math.sin(x / 2) * si - math.cos(x / 2) * (-DIGAMMA_ONE - ci + math.log(x))) / (t * s)
    fint = cos_f_integral(ell, t, quad_tol)
    return {"f_integral": fint, "sici": trig, "total": fint + trig}


def lie_asymptotic(ell: int, t: float, N: int = 4, tol: float = 1e-14) -> dict:
    """Large-L expansion of the Lie-parameter torsion, L = |ell + 1|.

    Returns the expansions of the finite log sum and of the sharp term, plus
    the zeta' summand (a closed constant times cos(Lt/2)) and the sum.
    """
    _check_t(t)
    if t <= 0:
        raise ValueError("the expansion is stated for 0 < t < 2 pi")
    if ell < 1 or N < 1:
        raise ValueError("need ell >= 1 and N >= 1")
    L = abs(ell + 1)
    half = Angle.from_float(t / 2)
    ang = Angle.from_float(t)
    with mpmath.workdps(WORK_DPS + N):
        tm = mpmath.mpf(t)
        s = mpmath.sin(tm / 2)
        e = lambda j: mpmath.expj(j * tm / 2)  # noqa: E731
        H = lambda sg: half if sg > 0 else -half  # noqa: E731

        # finite log sum
        g_sum = [AsymTerm(e(sg) / (-4 * s**2), 0, 1, H(sg)) for sg in (1, -1)]
        zp, e1 = _zeta_prime_exp(ang, tol)
        zm, e2 = _zeta_prime_exp(-ang, tol)
        # e^{-i(L-2)t/2} dPhi/ds(e^{it},0,1) = e^{-iLt/2} zeta'(e^{ikt}), and its mirror
        g_sum += [AsymTerm(-zp / (2j * s), 0, 0, -half), AsymTerm(zm / (2j * s), 0, 0, half)]
        for m in range(1, N):
            for sg in (1, -1):
                a = ang if sg > 0 else -ang
                c = sg * e(2 * sg) * _mp_phi_neg_int(a, m, 1) / (2j * s * (-1) ** m * m)
                g_sum.append(AsymTerm(c, -m, 0, H(sg)))
        sum_rb = remainder_bound_C(ang, N, 1) / (N * L**N * abs(float(s)))
        sum_cerr = float(1 / abs(s)) * (e1 + e2)

        # sharp term: Si/Ci part
        g_sharp = []
        pre = -1 / (tm * s)
        logt = mpmath.log(tm)
        for sg in (1, -1):
            # sin(Lt/2) and cos(Lt/2) split into e^{+-iLt/2}
            sin_c = sg / 2j
            cos_c = mpmath.mpf(1) / 2
            g_sharp.append(AsymTerm(pre * sin_c * mpmath.pi / 2, 0, 0, H(sg)))
            g_sharp.append(AsymTerm(pre * cos_c * (-1), 0, 1, H(sg)))
            g_sharp.append(AsymTerm(pre * cos_c * (-logt + DIGAMMA_ONE), 0, 0, H(sg)))
            for m in range(0, (N - 1) // 2 + 1):
                g_sharp.append(AsymTerm(pre * sin_c * (-1) ** m * mpmath.factorial(2 * m) / tm ** (2 * m + 1),
                                        -(2 * m + 1), 0, H(sg)))
            for m in range(1, N // 2 + 1):
                g_sharp.append(AsymTerm(pre * cos_c * (-1) ** m * mpmath.factorial(2 * m - 1) / tm ** (2 * m),
                                        -2 * m, 0, H(sg)))
            # f-derivative ladder: 2 (2/(Lt))^m cos((Lt + pi m)/2) f^{(m-1)}(1)
            for m in range(1, N + 1):
                c = (2 / tm) ** m * mpmath.mpf(f_derivative_at_one(m, t)) * mpmath.expjpi(sg * mpmath.mpf(m) / 2)
                g_sharp.append(AsymTerm(c, -m, 0, H(sg)))
        x = L * t
        # Si/Ci truncation: first omitted terms of the auxiliary series
        m_f = (N - 1) // 2 + 1
        m_g = N // 2 + 1
        sici_tail = math.factorial(2 * m_f) / x ** (2 * m_f + 1) + math.factorial(2 * m_g - 1) / x ** (2 * m_g)
        ladder_tail = 2 * (2 / x) ** N * f_derivative_sup(N, t)
        sharp_rb = (sici_tail / (t * abs(float(s))) + ladder_tail) * (1 + 1e-12)

        # zeta' summand: -cos(Lt/2)/sin(t/2) * S with S a convergent series
        S, S_err = _zeta_series_constant(t, tol)
        g_zeta = [AsymTerm(-S / (2 * s), 0, 0, H(sg)) for sg in (1, -1)]
        z_err = float(1 / abs(s)) * S_err

    sum_part = AsymptoticValue(collect(g_sum), L, sum_rb, sum_cerr, ledger={"sum": g_sum})
    sharp_part = AsymptoticValue(collect(g_sharp), L, sharp_rb, 0.0, ledger={"sharp": g_sharp})
    zeta_part = AsymptoticValue(collect(g_zeta), L, 0.0, z_err, ledger={"zeta_prime": g_zeta})
    total = AsymptoticValue(
        collect(g_sum + g_sharp + g_zeta), L, sum_rb + sharp_rb, sum_cerr + z_err,
        ledger={"sum": g_sum, "sharp": g_sharp, "zeta_prime": g_zeta},
    )
    return {"sum": sum_part, "sharp": sharp_part, "zeta_prime": zeta_part, "total": total}


def _zeta_series_constant(t: float, tol: float, K: int = 60):
    """sum_{k odd} (2 zeta'(-k) + H_k zeta(-k)) (-1)^{(k+1)/2} t^k / k! with bound."""
    q = (t / (2 * math.pi)) ** 2
    with mpmath.workdps(WORK_DPS + 20):
        tm = mpmath.mpf(t)
        total = mpmath.mpf(0)
        err = 0.0
        for k in range(1, 2 * K + 2, 2):
            c, e = _zeta_odd_coefficient(k, tol * float(mpmath.factorial(k)) / abs(t) ** k)
            w = (-1) ** ((k + 1) // 2) * tm**k / mpmath.factorial(k)
            total += c * w
            err += e * float(abs(w))

    def zterm(k):
        hk = 1 + math.log(k)
        return (abs(t) / (2 * math.pi)) ** k / (2 * math.pi) * (math.pi**2 * hk + 2 * math.pi**2 / 3 * math.log(2 * math.pi) + 4)

    return total, err + _geometric_tail(zterm, 2 * K + 3, q, 2)
