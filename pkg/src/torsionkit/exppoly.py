"""Exponential polynomials P(k, v) = sum c k^n v^r e^{i(k phi + v psi)} and the
zeta-operator calculus acting on their k-dependence.

The central result is ``sum_log_asymptotic``: a large-v expansion of
sum_{k=1}^{v+a} P(k) log k with a certified bound on the dropped remainder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import mpmath

from .combinat import harmonic
from .lerch import (
    WORK_DPS,
    Angle,
    BoundedValue,
    _mp_phi_neg_int,
    as_angle,
    lerch_sderiv_reference,
    mpq,
)

ZERO = Angle.from_pi(0)
_U = 2.0**-52


def to_mp(c):
    if isinstance(c, (mpmath.mpf, mpmath.mpc)):
        return mpmath.mpc(c)
    if isinstance(c, (Fraction, int)):
        return mpmath.mpc(mpq(c))
    return mpmath.mpc(complex(c))


def _is_mp(x) -> bool:
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


def _cmul(x, y):
    if isinstance(x, Fraction) and _is_mp(y):
        x = mpq(x)
    elif isinstance(y, Fraction) and _is_mp(x):
        y = mpq(y)
    return x * y


def _cadd(x, y):
    if isinstance(x, Fraction) and _is_mp(y):
        x = mpq(x)
    elif isinstance(y, Fraction) and _is_mp(x):
        y = mpq(y)
    return x + y


@dataclass(frozen=True)
class Key:
    n: int
    r: int
    phi: Angle
    psi: Angle


class ExpPoly:
    """Finite sum of c * k^n * v^r * e^{i(k phi + v psi)}.

    Coefficients may be int, Fraction, complex or mpmath numbers; arithmetic
    keeps whatever type the inputs carry, so rational inputs stay exact.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Key, object] | None = None):
        self.terms: dict[Key, object] = {}
        for k, c in (terms or {}).items():
            self._acc(k, c)

    def _acc(self, key: Key, c):
        c = _cadd(self.terms.get(key, 0), c)
        if c == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = c

    @classmethod
    def term(cls, c=1, n: int = 0, r: int = 0, phi=ZERO, psi=ZERO) -> ExpPoly:
        if n < 0:
            raise ValueError("k-degree must be nonnegative")
        return cls({Key(n, r, as_angle(phi), as_angle(psi)): c})

    @classmethod
    def const(cls, c) -> ExpPoly:
        return cls.term(c)

    @classmethod
    def from_list(cls, items) -> ExpPoly:
        """Build from tuples (c, n, r, phi, psi); phi/psi are Angles or floats."""
        out = cls()
        for it in items:
            c, n, r, phi, psi = (list(it) + [0, 0, ZERO, ZERO])[:5]
            out._acc(Key(n, r, as_angle(phi), as_angle(psi)), c)
        return out

    def copy(self) -> ExpPoly:
        return ExpPoly(dict(self.terms))

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __add__(self, other) -> ExpPoly:
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other)
        out = self.copy()
        for k, c in other:
            out._acc(k, c)
        return out

    __radd__ = __add__

    def __neg__(self) -> ExpPoly:
        return ExpPoly({k: -c for k, c in self})

    def __sub__(self, other) -> ExpPoly:
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other)
        return self + (-other)

    def __mul__(self, other) -> ExpPoly:
        if not isinstance(other, ExpPoly):
            return ExpPoly({k: _cmul(c, other) for k, c in self})
        out = ExpPoly()
        for k1, c1 in self:
            for k2, c2 in other:
                key = Key(k1.n + k2.n, k1.r + k2.r, k1.phi + k2.phi, k1.psi + k2.psi)
                out._acc(key, _cmul(c1, c2))
        return out

    __rmul__ = __mul__

    def __pow__(self, e: int) -> ExpPoly:
        out = ExpPoly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other)
        return (self - other).is_zero()

    def is_zero(self) -> bool:
        return not self.terms

    def map_coeffs(self, f) -> ExpPoly:
        return ExpPoly({k: f(c) for k, c in self})

    def __repr__(self) -> str:
        parts = [f"{c}*k^{k.n}*v^{k.r}*e^(i(k{k.phi.value:.4g}+v{k.psi.value:.4g}))" for k, c in self]
        return "ExpPoly(" + " + ".join(parts) + ")"

    # substitutions ------------------------------------------------

    def reflect(self) -> ExpPoly:
        """P(-k)."""
        return ExpPoly({Key(k.n, k.r, -k.phi, k.psi): -c if k.n % 2 else c for k, c in self})

    def odd(self) -> ExpPoly:
        return (self - self.reflect()) * Fraction(1, 2)

    def shift(self, a, with_v: bool = False, phase=None) -> ExpPoly:
        """P(k + a) or, with ``with_v``, P(k + a + v); a is an integer.

        ``phase`` maps (Angle, int) to e^{i a phi}; defaults to binary64.
        """
        phase = phase or (lambda ang, j: ang.unit(j))
        out = ExpPoly()
        for k, c in self:
            ph = _cmul(c, phase(k.phi, a)) if a and not k.phi.is_zero else c
            for i in range(k.n + 1):
                rest = k.n - i
                # (a + v)^rest, expanded when v is shifted in
                if with_v:
                    for j in range(rest + 1):
                        coef = ph * (comb(k.n, i) * comb(rest, j) * a ** (rest - j))
                        out._acc(Key(i, k.r + j, k.phi, k.psi + k.phi), coef)
                else:
                    out._acc(Key(i, k.r, k.phi, k.psi), ph * (comb(k.n, i) * a**rest))
        return out

    def at_v(self, v) -> ExpPoly:
        """Instantiate the v-variable, leaving a polynomial in k."""
        out = ExpPoly()
        for k, c in self:
            if k.r:
                c = _cmul(c, Fraction(v) ** k.r) if isinstance(v, (int, Fraction)) else to_mp(c) * mpmath.mpf(v) ** k.r
            if not k.psi.is_zero:
                c = to_mp(c) * _v_phase(k.psi, v)
            out._acc(Key(k.n, 0, k.phi, ZERO), c)
        return out

    def at_k0(self) -> ExpPoly:
        """Set k = 0, leaving a polynomial in v."""
        out = ExpPoly()
        for k, c in self:
            if k.n == 0:
                out._acc(Key(0, k.r, ZERO, k.psi), c)
        return out

    def v_degree(self) -> int:
        return max((k.r for k, _ in self), default=0)

    def project(self, N: int) -> ExpPoly:
        """Keep terms with v-degree > -N."""
        return ExpPoly({k: c for k, c in self if k.r > -N})

    def project_eq(self, N: int) -> ExpPoly:
        return ExpPoly({k: c for k, c in self if k.r == -N})

    def scale_v(self, c) -> ExpPoly:
        """Substitute v -> c v for a positive rational c."""
        c = Fraction(c)
        out = ExpPoly()
        for k, coef in self:
            psi = Angle.from_pi(k.psi.pi_frac * c) if k.psi.pi_frac is not None else Angle.from_float(k.psi.value * float(c))
            out._acc(Key(k.n, k.r, k.phi, psi), _cmul(coef, c**k.r))
        return out

    # evaluation ---------------------------------------------------

    def eval(self, k: int, v: float = 0.0) -> complex:
        with mpmath.workdps(30):
            return complex(self.eval_mp(k, v))

    def eval_mp(self, k: int, v=0):
        total = mpmath.mpc(0)
        vm = mpmath.mpf(v) if not isinstance(v, Fraction) else mpq(v)
        for key, c in self:
            t = to_mp(c)
            if key.n:
                t *= mpmath.mpf(k) ** key.n
            if key.r:
                t *= vm**key.r
            if not key.phi.is_zero:
                t *= key.phi.mp_unit(k)
            if not key.psi.is_zero:
                t *= _v_phase(key.psi, v)
            total += t
        return total

    # serialization ------------------------------------------------

    def to_json(self) -> list:
        return [[_re(c), _im(c), k.n, k.r, *_angle_json(k.phi), *_angle_json(k.psi)] for k, c in self._sorted()]

    @classmethod
    def from_json(cls, rows) -> ExpPoly:
        out = cls()
        for re_, im_, n, r, pn, pd, qn, qd in rows:
            out._acc(Key(n, r, _angle_from_json(pn, pd), _angle_from_json(qn, qd)), complex(re_, im_))
        return out

    def _sorted(self):
        return sorted(self, key=lambda kc: (kc[0].n, kc[0].r, kc[0].phi.value, kc[0].psi.value))


def _v_phase(psi: Angle, v):
    if isinstance(v, int) or (isinstance(v, float) and v.is_integer()) or isinstance(v, Fraction):
        if psi.pi_frac is not None and Fraction(v).denominator == 1:
            return psi.mp_unit(int(v))
        if psi.pi_frac is not None:
            return mpmath.expjpi(mpq(psi.pi_frac * Fraction(v)))
    return mpmath.expj(mpmath.mpf(psi.value) * v)


def _re(c) -> float:
    return float(complex(c).real) if not isinstance(c, (mpmath.mpf, mpmath.mpc)) else float(mpmath.re(c))


def _im(c) -> float:
    return float(complex(c).imag) if not isinstance(c, (mpmath.mpf, mpmath.mpc)) else float(mpmath.im(c))


def _angle_json(a: Angle):
    # den 0 marks an angle given only as a float: num then holds phi/pi
    if a.pi_frac is not None:
        return [a.pi_frac.numerator, a.pi_frac.denominator]
    return [a.value / math.pi, 0]


def _angle_from_json(num, den) -> Angle:
    if den == 0:
        return Angle.from_float(num * math.pi)
    return Angle.from_pi(Fraction(num, den))


def exact_phase(ang: Angle, j: int):
    return ang.mp_unit(j)


# ---------------------------------------------------------------- asymptotic values


@dataclass
class AsymTerm:
    c: object  # mpmath complex
    m: int
    p: int
    psi: Angle


@dataclass
class AsymptoticValue:
    """Truncated expansion sum c v^m (log v)^p e^{i v psi} evaluated at v.

    ``remainder_bound`` bounds the dropped tail only; ``bound`` adds the
    error of numerically evaluated coefficients and the final rounding.
    """

    terms: list[AsymTerm]
    v: float
    remainder_bound: float
    coeff_bound: float = 0.0
    mp_value: object = None
    value: complex = 0j
    bound: float = 0.0
    ledger: dict = field(default_factory=dict)

    def __post_init__(self):
        with mpmath.workdps(WORK_DPS):
            self.mp_value = evaluate_terms(self.terms, self.v)
            self.value = complex(self.mp_value)
        absum = sum(abs(complex(t.c)) * abs(self.v) ** t.m * max(1.0, math.log(self.v)) ** t.p for t in self.terms)
        self.bound = self.remainder_bound + self.coeff_bound + 2 * _U * abs(self.value) + absum * 1e-30

    def coefficient(self, m: int, p: int = 0, psi: Angle = ZERO):
        with mpmath.workdps(WORK_DPS):
            return sum((to_mp(t.c) for t in self.terms if t.m == m and t.p == p and t.psi == psi), mpmath.mpc(0))

    def coefficient_at(self, m: int, p: int = 0):
        """Coefficient of v^m (log v)^p with the oscillating phases e^{i v psi} evaluated at v."""
        with mpmath.workdps(WORK_DPS):
            return mpmath.fsum(
                to_mp(t.c) * (_v_phase(t.psi, self.v) if not t.psi.is_zero else 1)
                for t in self.terms if t.m == m and t.p == p
            )

    def to_json(self) -> dict:
        return {
            "terms": [
                [_re(t.c), _im(t.c), t.m, t.p, *_angle_json(t.psi)]
                for t in sorted(self.terms, key=lambda t: (-t.m, -t.p, t.psi.value))
            ],
            "v": self.v,
            "value": [self.value.real, self.value.imag],
            "bound": self.bound,
            "remainder_bound": self.remainder_bound,
        }


def evaluate_terms(terms, v):
    v_mp = mpq(v) if isinstance(v, (int, Fraction)) else mpmath.mpf(v)
    lv = mpmath.log(v_mp)
    total = mpmath.mpc(0)
    for t in terms:
        x = to_mp(t.c) * v_mp**t.m * lv**t.p
        if not t.psi.is_zero:
            x *= _v_phase(t.psi, v)
        total += x
    return total


def collect(terms) -> list[AsymTerm]:
    acc: dict = {}
    for t in terms:
        key = (t.m, t.p, t.psi)
        acc[key] = acc.get(key, 0) + to_mp(t.c)
    return [AsymTerm(c, m, p, psi) for (m, p, psi), c in acc.items() if c != 0]


def _v_terms(P: ExpPoly, p: int = 0) -> list[AsymTerm]:
    """Read a k-free ExpPoly as expansion terms times (log v)^p."""
    out = []
    for k, c in P:
        if k.n or not k.phi.is_zero:
            raise ValueError("expected a polynomial in v only")
        out.append(AsymTerm(to_mp(c), k.r, p, k.psi))
    return out


# ---------------------------------------------------------------- operators


def eval(P: ExpPoly, k: int, v: float = 0.0) -> complex:  # noqa: A001
    return P.eval(k, v)


def _zeta_monomial(n: int, phi: Angle):
    """zeta(k^n e^{ik phi}) = e^{i phi} Phi(e^{i phi}, -n, 1)."""
    if phi.is_zero:
        return _mp_phi_neg_int(phi, n, 1)
    return phi.mp_unit() * _mp_phi_neg_int(phi, n, 1)


def zeta_op(P: ExpPoly) -> ExpPoly:
    """Apply zeta to the k-dependence; v-factors are carried along."""
    out = ExpPoly()
    with mpmath.workdps(WORK_DPS + 10):
        for k, c in P:
            out._acc(Key(0, k.r, ZERO, k.psi), to_mp(c) * _zeta_monomial(k.n, k.phi))
    return out


def zeta_scalar(P: ExpPoly) -> complex:
    z = zeta_op(P)
    with mpmath.workdps(WORK_DPS):
        return complex(z.eval_mp(0, 1)) if not z.is_zero() else 0j


def zeta_prime_op(P: ExpPoly, tol: float = 1e-12) -> BoundedValue:
    """zeta'(P) = sum c e^{i phi} dPhi/ds(e^{i phi}, -n, 1) for P without v-dependence."""
    if any(k.r or not k.psi.is_zero for k, _ in P):
        raise ValueError("zeta_prime_op expects P independent of v; use zeta_prime_poly")
    total = BoundedValue(0j, 0.0)
    per = tol / max(1, len(P))
    for k, c in P:
        total = total + BoundedValue(complex(c), 0.0) * _zeta_prime_monomial(k.n, k.phi, per)
    return total


def _zeta_prime_monomial(n: int, phi: Angle, tol: float) -> BoundedValue:
    d = lerch_sderiv_reference(phi, n, 1, tol)
    if phi.is_zero:
        return d
    u = phi.unit()
    return BoundedValue(u * d.value, d.bound + 2 * _U * abs(d.value))


def zeta_prime_poly(P: ExpPoly, v: float, tol: float = 1e-12) -> tuple[ExpPoly, float]:
    """As zeta_prime_poly, with the coefficient error scaled to the evaluation point v."""
    out = ExpPoly()
    err = 0.0
    per = tol / max(1, len(P))
    for k, c in P:
        z = _zeta_prime_monomial(k.n, k.phi, per)
        cm = to_mp(c)
        out._acc(Key(0, k.r, ZERO, k.psi), cm * mpmath.mpc(z.value))
        err += abs(complex(cm)) * z.bound * abs(v) ** k.r
    return out, err


def zeta_ma(P: ExpPoly, m: int, a: int) -> complex:
    """zeta_{m,a} on pure exponentials: sum c e^{i phi} Phi(e^{i phi}, -m, a+1)."""
    total = mpmath.mpc(0)
    with mpmath.workdps(WORK_DPS + m):
        for k, c in P:
            if k.n > 0:
                raise ValueError("degree>0 unsupported")
            if k.r or not k.psi.is_zero:
                raise ValueError("zeta_ma expects P independent of v")
            ph = k.phi.mp_unit() if not k.phi.is_zero else 1
            total += to_mp(c) * ph * _mp_phi_neg_int(k.phi, m, a + 1)
        return complex(total)


def _zero_angle_terms(P: ExpPoly):
    return [(k, c) for k, c in P if k.phi.is_zero]


def structural_ops(P: ExpPoly, p, v=None) -> dict:
    """Odd part and the P*, tilde P*, Res values at p.

    v instantiates any v-factors; rational inputs give exact results.
    """
    star = 0
    tilde = 0
    res = 0
    for k, c in _zero_angle_terms(P):
        if k.r or not k.psi.is_zero:
            if v is None:
                raise ValueError("P has v-dependence; pass v")
            c = c * (Fraction(v) if isinstance(v, int) else v) ** k.r
            if not k.psi.is_zero:
                c = c * complex(_v_phase(k.psi, v))
        n = k.n
        pp = p ** (n + 1)
        star += -c * pp * harmonic(n) / (4 * (n + 1))
        tilde += c * pp * Fraction(1, 2 * (n + 1) ** 2)
        res += c * pp * Fraction(1, 2 * (n + 1))
    return {"odd": P.odd(), "star": star, "tilde_star": tilde, "res": res}


def structural_polys(P: ExpPoly, a: int, scale=1) -> tuple[ExpPoly, ExpPoly, ExpPoly]:
    """2 Res P(p), tilde P*(p) and P*(p) at p = scale*v + a, as polynomials in v."""
    scale = Fraction(scale)
    res2 = ExpPoly()
    tilde = ExpPoly()
    star = ExpPoly()
    for k, c in _zero_angle_terms(P):
        n = k.n
        for j in range(n + 2):
            b = comb(n + 1, j) * Fraction(a) ** (n + 1 - j) * scale**j
            key = Key(0, k.r + j, ZERO, k.psi)
            res2._acc(key, _cmul(c, b / (n + 1)))
            tilde._acc(key, _cmul(c, b / (2 * (n + 1) ** 2)))
            star._acc(key, _cmul(-c, b * harmonic(n) / (4 * (n + 1))))
    return res2, tilde, star


def log_dagger_truncate(P: ExpPoly, N: int, shift=(0, 1)) -> ExpPoly:
    """P(k, v) * log‡((k + a)/(c v) + 1), keeping v-degrees > -N.

    log‡(x + 1) = -sum_{j>=1} (-x)^j / j; ``shift`` is the pair (a, c).
    """
    if N < 1:
        raise ValueError("N must be positive")
    a, c = Fraction(shift[0]), Fraction(shift[1])
    top = P.v_degree()
    jmax = top + N - 1
    out = ExpPoly()
    ka = ExpPoly({Key(1, 0, ZERO, ZERO): 1, Key(0, 0, ZERO, ZERO): a}) if a else ExpPoly.term(1, 1)
    power = ExpPoly.const(1)
    for j in range(1, jmax + 1):
        power = power * ka
        factor = Fraction(-((-1) ** j), j) / c**j
        series_j = ExpPoly({Key(kk.n, kk.r - j, kk.phi, kk.psi): _cmul(cc, factor) for kk, cc in power})
        out = out + (P * series_j).project(N)
    return out


def log_dagger_const(P: ExpPoly, N: int, a, scale=1) -> ExpPoly:
    """P(v) * log‡(a/(scale v) + 1) with v-degrees > -N; P must be k-free."""
    a = Fraction(a) / Fraction(scale)
    out = ExpPoly()
    if a == 0:
        return out
    top = P.v_degree()
    for j in range(1, top + N):
        factor = -Fraction((-a) ** j, j)
        for k, c in P:
            if k.r - j > -N:
                out._acc(Key(k.n, k.r - j, k.phi, k.psi), _cmul(c, factor))
    return out


# ---------------------------------------------------------------- sums of P(k) log k


def sum_log_exact(P: ExpPoly, a: int, v: int) -> complex:
    """sum_{k=1}^{v+a} P(k) log k, v-slots set to v."""
    with mpmath.workdps(WORK_DPS):
        return complex(_sum_log_exact_mp(P, a, v))


def _sum_log_exact_mp(P: ExpPoly, a: int, v: int):
    if v + a < 1:
        raise ValueError("need v + a >= 1")
    return mpmath.fsum(P.eval_mp(k, v) * mpmath.log(k) for k in range(2, v + a + 1))


def zeta_r_bound(P: ExpPoly, a: int, ell: float, N: int, scale=1) -> float:
    """Certified bound on the remainder operator applied to P (already reflected).

    P is a polynomial in (k, ell); the expansion variable is v = scale * ell.
    Terms sharing (n, r, phi) are combined with their ell-phases first.
    """
    groups: dict = {}
    for k, c in P:
        n, r = k.n, k.r
        if n + r + N < 0 or r + N < 1:
            raise ValueError("precondition n + r + N >= 0 and r + N >= 1 violated")
        key = (n, r, k.phi.abs_value if not k.phi.is_zero else 0.0, k.phi.is_zero)
        with mpmath.workdps(30):
            ph = to_mp(c) * (_v_phase(k.psi, ell) if not k.psi.is_zero else 1)
        groups[key] = groups.get(key, 0) + ph
    total = 0.0
    z2 = math.pi**2 / 3
    scale = float(scale)
    for (n, r, phi_abs, is_zero), c in groups.items():
        phi0 = 2 * math.pi if is_zero else phi_abs
        M = n + r + N
        t = math.factorial(n) * math.factorial(r + N - 1) * (z2 / phi0 ** (M + 1) + a ** (M + 1) / math.factorial(M))
        total += float(abs(c)) * t * scale ** (-r - N)
    return total * float(ell) ** (-N) * (1 + 1e-12)


def sum_log_asymptotic(P: ExpPoly, a: int, v: int, N: int, tol: float = 1e-20) -> AsymptoticValue:
    """Large-v expansion of sum_{k=1}^{v+a} P(k) log k truncated at v-degree > -N."""
    if N < 1:
        raise ValueError("N must be positive")
    with mpmath.workdps(WORK_DPS + N + 10):
        Pm = P.map_coeffs(to_mp)
        res2, tilde, _ = structural_polys(Pm, a)
        shifted = Pm.shift(a, with_v=True, phase=exact_phase)
        terms: list[AsymTerm] = []
        ledger = {}

        g1 = _v_terms(tilde * -2)
        g2 = _v_terms(res2, 1)
        g3 = _v_terms(-zeta_op(shifted), 1)
        zp, zerr = zeta_prime_poly(Pm, v, tol)
        g4 = _v_terms(-zp)
        g5 = _v_terms(log_dagger_const(res2, N, a))
        g6 = _v_terms(-zeta_op(log_dagger_truncate(shifted, N, (a, 1))))
        for name, g in (("tilde_star", g1), ("res_log", g2), ("zeta_log", g3),
                        ("zeta_prime", g4), ("res_logdagger", g5), ("zeta_logdagger", g6)):
            ledger[name] = g
            terms.extend(g)
        rb = zeta_r_bound(P.reflect(), a, v, N)
        return AsymptoticValue(collect(terms), v, rb, zerr, ledger=ledger)
