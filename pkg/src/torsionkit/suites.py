"""Verification suites shared by the command line and the test-suite.

Every check returns a ``Check``; randomized cases draw from ``random.Random(seed)``
so a seed fixes the whole run.  ``CRITERIA`` maps the numbered acceptance
criteria to their check functions.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import combinat, exppoly, lerch, liealg, torsion_forms, torsion_p1
from .exppoly import ExpPoly
from .lerch import Angle

Q = Fraction


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _all(name: str, checks: list[Check]) -> Check:
    bad = [c for c in checks if not c.ok]
    detail = f"{len(checks) - len(bad)}/{len(checks)} cases"
    if bad:
        detail += "; first failure: " + bad[0].name + (f" {bad[0].detail}" if bad[0].detail else "")
    return Check(name, not bad, detail)


_ANGLES = {"0": Angle.from_pi(0), "0.6": Angle.from_float(0.6), "pi": Angle.from_pi(1), "2.5": Angle.from_float(2.5)}


# ---------------------------------------------------------------- lerch


def lerch_grid(seed: int = 0, cases: int = 100) -> list[Check]:
    rng = random.Random(seed)
    grid = [(p, n, a, v, N) for p in _ANGLES for n in range(4) for a in range(4) for v in (20, 50, 100) for N in range(1, 13)]
    out = []
    for p, n, a, v, N in rng.sample(grid, cases):
        z = _ANGLES[p]
        asy = lerch.lerch_sderiv_asymptotic(z, n, v, a, N)
        ref = lerch.lerch_sderiv_reference(z, n, v + a, 1e-13)
        err = abs(asy.value - ref.value)
        ok = err <= asy.bound + ref.bound
        if asy.bound <= 1e-6:
            ok = ok and err <= 1e-6
        out.append(Check(f"phi={p} n={n} a={a} v={v} N={N}", ok, f"err={err:.2e} bound={asy.bound:.2e}"))
    return out


def stirling_anchor() -> list[Check]:
    out = []
    for v in (5, 10, 50):
        d = lerch.lerch_sderiv_reference(Angle.from_pi(0), 0, v, 1e-12)
        with mpmath.workdps(30):
            target = mpmath.loggamma(v) - mpmath.log(mpmath.sqrt(2 * mpmath.pi))
        err = abs(d.value.real - float(target))
        out.append(Check(f"v={v}", err <= 1e-9, f"err={err:.1e}"))
    return out


def zeta_prime_minus_two() -> list[Check]:
    d = lerch.lerch_sderiv_reference(Angle.from_pi(0), 2, 1, 1e-10)
    with mpmath.workdps(30):
        target = -mpmath.zeta(3) / (4 * mpmath.pi**2)
    err = abs(d.value.real - float(target))
    return [Check("zeta'(-2) = -zeta(3)/(4 pi^2)", err <= 1e-9, f"err={err:.1e}")]


def shift_identities(seed: int = 0, cases: int = 30) -> list[Check]:
    rng = random.Random(seed + 1)
    out = []
    for _ in range(cases):
        z = Angle.from_float(rng.uniform(0.1, 3.1) * rng.choice((1, -1)))
        m = rng.randrange(0, 7)
        a = rng.randrange(1, 7)
        lhs = z.unit() * lerch.phi_neg_int(z, m, a + 1)
        rhs = lerch.phi_neg_int(z, m, a) - a**m
        ok1 = abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))
        steps = rng.randrange(1, 6)
        ladder = z.unit(-steps) * (lerch.phi_neg_int(z, m, a) - sum(z.unit(k) * (a + k) ** m for k in range(steps)))
        direct = lerch.phi_neg_int(z, m, a + steps)
        ok2 = abs(ladder - direct) <= 1e-12 * max(1.0, abs(direct))
        out.append(Check(f"phi={z.value:.3f} m={m} a={a} L={steps}", ok1 and ok2))
    return out


# ---------------------------------------------------------------- exppoly


def master_corpus() -> list[tuple[ExpPoly, int]]:
    """30 fixed (P, a) pairs with k-degree <= 3, no v-dependence."""
    names = list(_ANGLES)
    corpus = []
    i = 0
    for n in range(4):
        for p in names:
            corpus.append((ExpPoly.term(Q(1 + n, 2), n, 0, _ANGLES[p]), (0, 1, 3)[i % 3]))
            i += 1
    pairs = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3), (3, 3), (2, 0), (1, 1), (0, 3), (2, 2), (3, 1), (1, 0), (2, 1)]
    for j, (n1, n2) in enumerate(pairs):
        p1, p2 = names[j % 4], names[(j + 1 + j // 4) % 4]
        P = ExpPoly.term(Q(1), n1, 0, _ANGLES[p1]) + ExpPoly.term(Q(-2, 3), n2, 0, _ANGLES[p2])
        corpus.append((P, (0, 1, 3)[j % 3]))
    return corpus


def master_expansion(vs=(50, 100, 200), Ns=(4, 8)) -> list[Check]:
    out = []
    for idx, (P, a) in enumerate(master_corpus()):
        for v in vs:
            for N in Ns:
                e = exppoly.sum_log_exact(P, a, v)
                asy = exppoly.sum_log_asymptotic(P, a, v, N)
                err = abs(e - asy.value)
                out.append(Check(f"P#{idx} a={a} v={v} N={N}", err <= asy.bound, f"err={err:.2e} bound={asy.bound:.2e}"))
    return out


def _random_poly(rng: random.Random) -> ExpPoly:
    P = ExpPoly()
    for _ in range(rng.randrange(1, 4)):
        ang = rng.choice([Angle.from_pi(0), Angle.from_pi(Q(rng.randrange(1, 12), 6)), Angle.from_float(rng.uniform(0.2, 3.0))])
        P = P + ExpPoly.term(Q(rng.randrange(-9, 10), rng.randrange(1, 5)) or Q(1), rng.randrange(0, 5), 0, ang)
    return P


def zeta_symmetry(seed: int = 0, cases: int = 20) -> list[Check]:
    """zeta(P(k) + P(-k)) = -P(0)."""
    rng = random.Random(seed + 2)
    out = []
    for i in range(cases):
        P = _random_poly(rng)
        z = exppoly.zeta_op(P + P.reflect())
        val = complex(z.eval_mp(0, 1)) if not z.is_zero() else 0j
        p0 = P.eval(0)
        err = abs(val + p0)
        out.append(Check(f"P#{i}", err <= 1e-12 * max(1.0, abs(p0)) + 1e-25, f"err={err:.1e}"))
    return out


def zeta_bernoulli_ops() -> list[Check]:
    """zeta of B_m(-k) and of (k+1)^n through the operator on monomials."""
    out = []
    for m in range(13):
        P = ExpPoly()
        for i, c in enumerate(combinat.bernoulli_poly_coeffs(m)):
            if c:
                P = P + ExpPoly.term(c * (-1) ** i, i, 0)
        got = exppoly.zeta_scalar(P) if not P.is_zero() else 0j
        want = -combinat.bernoulli(m + 1) - combinat.bernoulli(m)
        out.append(Check(f"zeta B_{m}(-k)", abs(got - float(want)) <= 1e-25 + 1e-14 * abs(float(want))))
    for n in range(11):
        P = ExpPoly()
        for i in range(n + 1):
            P = P + ExpPoly.term(Q(math.comb(n, i)), i, 0)
        got = exppoly.zeta_scalar(P)
        want = torsion_forms._shift_zeta(n)
        out.append(Check(f"zeta (k+1)^{n}", abs(got - float(want)) <= 1e-25 + 1e-14 * abs(float(want))))
    return out


# ---------------------------------------------------------------- exact identities


def exact_identities(seed: int = 0) -> list[Check]:
    rng = random.Random(seed + 3)
    out = []
    avals = [Q(rng.randrange(-50, 51), rng.randrange(1, 30)) for _ in range(50)]
    ok = all(
        (lambda lr: lr[0] == lr[1])(combinat.nichtha_identity(m, j, a))
        for m in range(1, 9) for j in range(9) for a in avals
    )
    out.append(Check("binomial-sum closed form (m<=8, j<=8, 50 rationals)", ok))
    ok = all(
        (lambda lr: lr[0] == lr[1])(combinat.binomial_coefficient_identity(m, j, r))
        for m in range(0, 17) for j in range(0, 17 - m) for r in range(0, max(m + j, 1))
    )
    out.append(Check("coefficient form (m+j<=16)", ok))
    out.append(Check("Euler convolution (m<=20)", all(l == r for l, r in map(combinat.euler_convolution, range(1, 21)))))
    out.append(Check("zeta of Bernoulli polynomials (m<=12)", all(l == r for l, r in map(combinat.zeta_bernoulli, range(0, 13)))))
    return out


def structure_identities() -> list[Check]:
    out = []
    for label in ("A1", "A2", "A3", "B2", "G2"):
        rs = liealg.root_system(label)
        a, b = liealg.strange_formula(rs)
        c, d = liealg.gordon_brown(rs)
        out.append(Check(f"strange formula {label}", a == b, f"{a} vs {b}"))
        out.append(Check(f"Gordon Brown {label}", c == d, f"{c} vs {d}"))
    kr = liealg.killing_ratio(liealg.space("Gr24"))
    out.append(Check("Killing ratio Gr(2,4) = 1/2", kr == Q(1, 2), str(kr)))
    for name in ("P1", "P2", "Gr24"):
        lhs, n = liealg.dimension_count_identity(liealg.space(name))
        out.append(Check(f"weighted dimension identity {name}", lhs == n, f"{lhs} vs {n}"))
    return out


def character_symmetry(seed: int = 0, cases: int = 6) -> list[Check]:
    """chi_{mu-k alpha} = -chi_{mu+(k-c)alpha} with mu = rho+ell lam and c = <alpha^vee, mu>."""
    rng = random.Random(seed + 4)
    out = []
    names = ("P1", "P2", "Gr24", "SU3/T")
    for i in range(cases):
        sp = liealg.space(names[i % len(names)])
        alpha = rng.choice(sp.psi)
        ell = rng.randrange(1, 30)
        c = liealg.coroot_pair(alpha, liealg.vadd(sp.rs.rho, liealg.vscale(ell, sp.lam)))
        for X in (None, liealg.regular_point(sp.rs, rng)):
            P = liealg.character_family(sp, alpha, X).at_v(ell)
            lhs = P.reflect()
            rhs = -(P.shift(-int(c)))
            if X is None:
                ok = lhs == rhs
            else:
                diff = lhs - rhs
                ok = all(abs(complex(v)) < 1e-10 for _, v in diff)
            out.append(Check(f"{sp.name} alpha={alpha} ell={ell} X={'0' if X is None else 'regular'}", ok))
    return out


# ---------------------------------------------------------------- torsion on P1 and on homogeneous spaces


def p1_rotation() -> list[Check]:
    out = []
    for f in (Q(1, 3), Q(1, 2), Q(2, 3)):
        for ell in (50, 100, 200):
            inp = torsion_p1.P1Input(ell, phi_pi=f, N=10)
            ex = torsion_p1.p1_exact(inp)
            asy = torsion_p1.p1_asymptotic(inp)
            err = abs(ex.value - asy.value)
            out.append(Check(f"phi/pi={f} ell={ell}", err <= asy.bound + ex.bound, f"err={err:.2e} bound={asy.bound:.2e}"))
            sym = liealg.torsion_symmetric_exact(liealg.space("P1"), ell, liealg.p1_point(f))
            d = abs(sym.value - ex.value)
            out.append(Check(f"P1 via root data, phi/pi={f} ell={ell}", d <= sym.bound + ex.bound, f"diff={d:.1e}"))
    return out


def finski_constants() -> list[Check]:
    out = []
    for name in ("P1", "P2"):
        res = liealg.finski_coefficients(name)
        for key in ("c_top_log", "c_sub_log", "c_sub_const"):
            got = res["coefficients"][key]
            want = complex(res["targets"][key])
            err = abs(got - want)
            out.append(Check(f"{name} {key}", err <= 1e-6, f"err={err:.1e}"))
    return out


def jantzen_checks(ells=(20, 40, 80), N: int = 8) -> list[Check]:
    out = []
    sp = liealg.flag_space("A1", (Q(1, 2), Q(-1, 2)))
    coeffs = liealg.jantzen_log_coefficients(sp, 3)
    out.append(Check("A1 ell=3 exact value 2 log 3", coeffs == {3: Q(2)}, str(coeffs)))
    cases = [("A1", (Q(1, 2), Q(-1, 2))), ("A2", (1, 0, -1))]
    for group, lam in cases:
        for X in (None, "regular"):
            rs = liealg.root_system(group)
            Xv = None if X is None else liealg.regular_point(rs, random.Random(11))
            for ell in ells:
                res = liealg.jantzen_pair(group, lam, ell, Xv, N)
                asy = res["asymptotic"]
                err = abs(res["exact"] - asy.value)
                out.append(Check(f"{group} X={X or 0} ell={ell}", err <= asy.bound, f"err={err:.2e} bound={asy.bound:.2e}"))
    return out


# ---------------------------------------------------------------- torsion forms


def torsion_form_grid() -> list[Check]:
    out = []
    for m in (0, 1, 2):
        for N in (6, 10):
            gaps = []
            for ell in (40, 80, 160):
                g, b = torsion_forms.t_coeff_gap(ell, m, N)
                gaps.append(g)
                out.append(Check(f"m={m} N={N} ell={ell}", g <= b, f"gap={g:.2e} bound={b:.2e}"))
            # contraction per doubling, slack factor 2
            need = 2 ** (N - 1) / 2
            ratios = [gaps[i] / gaps[i + 1] for i in range(2) if gaps[i + 1] > 0]
            out.append(Check(f"m={m} N={N} contraction", all(r >= need for r in ratios), ", ".join(f"{r:.0f}" for r in ratios)))
    return out


def torsion_form_symbolic() -> list[Check]:
    out = []
    for m in range(7):
        tot = torsion_forms._t_total_symbolic(m, 6)
        out.append(Check(f"ell^{{2m}} coefficient m={m}", tot.restrict(lambda j, p: j == 2 * m) == torsion_forms.leading_coefficient_2m(m)))
        top = torsion_forms.t22_symbolic(m) + torsion_forms.t23_even_symbolic(m) + torsion_forms.t1_symbolic(m) * 0
        want = torsion_forms.LaurentLog({
            (2 * m + 1, 1): torsion_forms.SymbolicCoeff.rational(Q(1, 2 ** (2 * m + 2))),
            (2 * m + 1, 0): torsion_forms.SymbolicCoeff.of(torsion_forms.LOG2PI, -Q(1, 2 ** (2 * m + 2))),
        })
        out.append(Check(f"top log terms m={m}", top.restrict(lambda j, p: j == 2 * m + 1) == want))
        t = torsion_forms.t21_symbolic(m) + torsion_forms.t3_symbolic(m)
        out.append(Check(f"T21+T3 cancellation m={m}", t.restrict(lambda j, p: j >= 2 * m + 1).is_zero()))
        out.append(Check(f"T21 presentations agree m={m}", torsion_forms.t21_power(m) == torsion_forms.t21_symbolic(m)))
        for N in (1, 4, 10):
            a = torsion_forms.t_power_total(m, N)
            b = torsion_forms.bernoulli_total_full(m, N)
            out.append(Check(f"power and Bernoulli presentations agree m={m} N={N}", a == b and b == torsion_forms._t_total_symbolic(m, N)))
    for m in (1, 2):
        tot = torsion_forms._t_total_symbolic(m, 6)
        out.append(Check(f"ell^{{2m-2}} closed form m={m}", tot.restrict(lambda j, p: j == 2 * m - 2) == torsion_forms.next_coefficient_2m_minus_2(m)))
        got = tot.restrict(lambda j, p: j == 2 * m - 1)
        out.append(Check(f"ell^{{2m-1}} closed form with 3*2^(2m+3) normalization m={m}",
                         got == torsion_forms.next_coefficient_2m_minus_1(m) * Q(1, 2)))
    return out


def printed_display_checks() -> list[Check]:
    """The ell^{2m-1} display taken literally, normalization 3*2^(2m+2)."""
    out = []
    for m in (1, 2):
        tot = torsion_forms._t_total_symbolic(m, 6)
        got = tot.restrict(lambda j, p: j == 2 * m - 1)
        want = torsion_forms.next_coefficient_2m_minus_1(m)
        ratio = ""
        c_got = got.coefficient(2 * m - 1, 1).terms.get("1")
        c_want = want.coefficient(2 * m - 1, 1).terms.get("1")
        if c_got and c_want:
            ratio = f"computed/display = {c_got / c_want}"
        out.append(Check(f"ell^{{2m-1}} display as printed m={m}", got == want, ratio))
    return out


def puchol_checks() -> list[Check]:
    out = []
    for n in range(9):
        ok, _ = torsion_forms.puchol_check(n)
        lead = torsion_forms.leading_torsion_form(n)
        full = torsion_forms.assemble_torsion_form(n)
        same = full.map_coeffs(lambda c: c.restrict(lambda j, p: j >= n)) == lead
        out.append(Check(f"leading-term identity n={n}", ok))
        out.append(Check(f"closed-form leading terms n={n}", same))
    return out


# ---------------------------------------------------------------- Lie parameter


def lie_parameter(t: float = 1.0, Ls=(50, 100, 200)) -> list[Check]:
    out = []
    errs = []
    for L in Ls:
        ell = L - 1
        oracle = torsion_p1.oscillatory_integral_oracle(ell, t)
        asy = torsion_p1.lie_asymptotic(ell, t, 4)["sharp"]
        err = float(abs(asy.value.real - oracle))
        errs.append(err)
        out.append(Check(f"sharp part L={L}", err <= asy.bound + 1e-10, f"err={err:.2e} bound={asy.bound:.2e}"))
        dec = torsion_p1.sharp_decomposition(ell, t)
        d = float(abs(dec["total"] - oracle))
        out.append(Check(f"Si/Ci decomposition L={L}", d <= 1e-8, f"diff={d:.1e}"))
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    out.append(Check("error decrease per doubling >= 3", all(r >= 3 for r in ratios), ", ".join(f"{r:.1f}" for r in ratios)))
    return out


def lie_series_grouping() -> list[Check]:
    out = []
    for ell in (0, 2, 5, 11):
        cs = torsion_p1.lie_series_coefficients(ell, 3)
        for m in range(4):
            t = torsion_forms.t_coeff_exact(ell, m).value.real
            want = 2 * (-1) ** m / math.factorial(2 * m + 1) * t
            err = abs(float(cs[m]) - want)
            out.append(Check(f"t^{2 * m} coefficient ell={ell}", err <= 1e-9 * max(1.0, abs(want)), f"err={err:.1e}"))
    return out


# ---------------------------------------------------------------- registry

CRITERIA = {
    1: ("Lerch engine: asymptotic vs reference on a 100-case grid", lambda seed: [_all("grid", lerch_grid(seed))]),
    2: ("Stirling anchor", lambda seed: stirling_anchor()),
    3: ("zeta'(-2) cross-check", lambda seed: zeta_prime_minus_two()),
    4: ("Sum-log master expansion on the 30-case corpus", lambda seed: [_all("corpus", master_expansion())]),
    5: ("P1 rotation torsion", lambda seed: [_all("grid", p1_rotation())]),
    6: ("Non-equivariant constants on P1 and P2", lambda seed: finski_constants()),
    7: ("Jantzen sums", lambda seed: [_all("grid", jantzen_checks())]),
    8: (
        "Torsion forms",
        lambda seed: [
            _all("exact vs expansion", torsion_form_grid()),
            _all("symbolic coefficients", torsion_form_symbolic()),
            *printed_display_checks(),
            _all("leading-term identity", puchol_checks()),
        ],
    ),
    9: (
        "Exact identity suites",
        lambda seed: [
            *exact_identities(seed),
            _all("zeta symmetry", zeta_symmetry(seed)),
            _all("shift and ladder", shift_identities(seed)),
            _all("character symmetry", character_symmetry(seed)),
            *structure_identities(),
        ],
    ),
    10: ("Lie-parameter torsion", lambda seed: lie_parameter()),
}

SUITES = {
    "identities": lambda seed: [
        *exact_identities(seed),
        *zeta_symmetry(seed),
        *zeta_bernoulli_ops(),
        *shift_identities(seed),
        *character_symmetry(seed),
        *structure_identities(),
    ],
    "lerch": lambda seed: lerch_grid(seed) + stirling_anchor() + zeta_prime_minus_two(),
    "exppoly": lambda seed: master_expansion(),
    "liealg": lambda seed: finski_constants() + jantzen_checks(),
    "p1": lambda seed: p1_rotation() + lie_parameter() + lie_series_grouping(),
    "forms": lambda seed: torsion_form_grid() + torsion_form_symbolic() + puchol_checks(),
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    if name == "all":
        return [c for key in SUITES for c in SUITES[key](seed)]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; known: {sorted(SUITES) + ['all']}")
    return SUITES[name](seed)


def run_criterion(k: int, seed: int = 0) -> tuple[bool, list[Check]]:
    _, fn = CRITERIA[k]
    checks = fn(seed)
    return all(c.ok for c in checks), checks
