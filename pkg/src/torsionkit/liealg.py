"""Root systems, Weyl characters and torsion expansions on compact Hermitian
homogeneous spaces G/K.

Vectors are tuples of Fractions in an ambient Euclidean space; the base inner
product is the dot product. Characters at a torus point e^X are written as
exponential polynomials in (k, ell) where k moves the weight along a root and
ell scales the line bundle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

import mpmath

from .combinat import harmonic
from .exppoly import (
    ZERO,
    AsymptoticValue,
    AsymTerm,
    ExpPoly,
    Key,
    _v_terms,
    collect,
    log_dagger_const,
    log_dagger_truncate,
    structural_polys,
    to_mp,
    zeta_op,
    zeta_prime_op,
    zeta_prime_poly,
    zeta_r_bound,
)
from .lerch import (
    WORK_DPS,
    Angle,
    BoundedValue,
    _mp_phi_neg_int,
    mpq,
    remainder_bound_C,
)

Q = Fraction
Vec = tuple
_U = 2.0**-52


def dot(x, y) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Q(0))


def vadd(x, y) -> Vec:
    return tuple(a + b for a, b in zip(x, y))


def vscale(c, x) -> Vec:
    return tuple(c * a for a in x)


def vec(*xs) -> Vec:
    return tuple(Q(x) for x in xs)


def coroot_pair(alpha, mu) -> Fraction:
    """<alpha^vee, mu> = 2 <alpha, mu> / <alpha, alpha>."""
    return 2 * dot(alpha, mu) / dot(alpha, alpha)


def _e(i: int, d: int) -> Vec:
    return tuple(Q(1) if j == i else Q(0) for j in range(d))


# ---------------------------------------------------------------- root systems


@dataclass(frozen=True)
class RootSystem:
    label: str
    roots: tuple
    positive: tuple
    simple: tuple

    @property
    def dim(self) -> int:
        return len(self.roots[0])

    @property
    def rank(self) -> int:
        return len(self.simple)

    @property
    def dim_group(self) -> int:
        return self.rank + len(self.roots)

    @cached_property
    def rho(self) -> Vec:
        return _half_sum(self.positive, self.dim)

    def gram(self) -> list[list[Fraction]]:
        return [[dot(a, b) for b in self.simple] for a in self.simple]


def _half_sum(roots, d: int) -> Vec:
    s = tuple(Q(0) for _ in range(d))
    for a in roots:
        s = vadd(s, a)
    return vscale(Q(1, 2), s)


def _from_roots(label: str, roots, h) -> RootSystem:
    roots = tuple(sorted(set(roots)))
    pos = tuple(a for a in roots if dot(a, h) > 0)
    if len(pos) * 2 != len(roots):
        raise ValueError("h is not regular for this root set")
    # simple roots: positive roots that are not a sum of two positive roots
    posset = set(pos)
    simple = tuple(a for a in pos if not any(tuple(x - y for x, y in zip(a, b)) in posset for b in pos))
    return RootSystem(label, roots, pos, simple)


def _type_a(n: int) -> RootSystem:
    d = n + 1
    roots = [tuple(x - y for x, y in zip(_e(i, d), _e(j, d))) for i in range(d) for j in range(d) if i != j]
    h = vec(*range(d, 0, -1))
    return _from_roots(f"A{n}", roots, h)


def _type_b2() -> RootSystem:
    roots = [vec(1, 0), vec(-1, 0), vec(0, 1), vec(0, -1)]
    roots += [vec(s, t) for s in (1, -1) for t in (1, -1)]
    return _from_roots("B2", roots, vec(2, 1))


def _type_g2() -> RootSystem:
    roots = []
    for i in range(3):
        for j in range(3):
            if i != j:
                roots.append(tuple(x - y for x, y in zip(_e(i, 3), _e(j, 3))))
        long = tuple(Q(2) if m == i else Q(-1) for m in range(3))
        roots += [long, vscale(-1, long)]
    return _from_roots("G2", roots, vec(-1, -2, 3))


@lru_cache(maxsize=None)
def root_system(label: str) -> RootSystem:
    if label in ("A1", "A2", "A3"):
        return _type_a(int(label[1]))
    if label == "B2":
        return _type_b2()
    if label == "G2":
        return _type_g2()
    raise ValueError(f"unsupported root system type {label!r}")


def _reflection(alpha) -> tuple:
    d = len(alpha)
    n = dot(alpha, alpha)
    return tuple(
        tuple((Q(1) if i == j else Q(0)) - 2 * alpha[i] * alpha[j] / n for j in range(d)) for i in range(d)
    )


def _matmul(A, B) -> tuple:
    d = len(A)
    return tuple(tuple(sum((A[i][m] * B[m][j] for m in range(d)), Q(0)) for j in range(d)) for i in range(d))


def apply(M, x) -> Vec:
    return tuple(dot(row, x) for row in M)


def weyl_group_of(generators, d: int) -> list[tuple]:
    """Closure of the reflections in ``generators``; elements are (matrix, sign)."""
    ident = tuple(tuple(Q(1) if i == j else Q(0) for j in range(d)) for i in range(d))
    gens = [_reflection(a) for a in generators]
    seen = {ident: 1}
    frontier = [ident]
    while frontier:
        nxt = []
        for M in frontier:
            for S in gens:
                P = _matmul(S, M)
                if P not in seen:
                    seen[P] = -seen[M]
                    nxt.append(P)
        frontier = nxt
    return list(seen.items())


@lru_cache(maxsize=None)
def _weyl_cached(label: str):
    rs = root_system(label)
    return tuple(weyl_group_of(rs.simple, rs.dim))


def weyl_group(rs: RootSystem) -> list[tuple]:
    return list(_weyl_cached(rs.label))


def weyl_dim_virtual(rs: RootSystem, mu) -> Fraction:
    """prod_{beta > 0} <beta^vee, rho + mu> / <beta^vee, rho>; zero on walls, signed off the chamber."""
    out = Q(1)
    lam = vadd(rs.rho, mu)
    for b in rs.positive:
        out *= coroot_pair(b, lam) / coroot_pair(b, rs.rho)
    return out


def weight_system(rs: RootSystem, kind: str) -> list[Vec]:
    """Weights (with multiplicity) of the defining or adjoint representation."""
    d = rs.dim
    zero = tuple(Q(0) for _ in range(d))
    if kind == "adjoint":
        return list(rs.roots) + [zero] * rs.rank
    if kind != "defining":
        raise ValueError("kind must be 'defining' or 'adjoint'")
    if rs.label.startswith("A"):
        mean = Q(1, d)
        return [tuple(Q(1) - mean if j == i else -mean for j in range(d)) for i in range(d)]
    if rs.label == "B2":
        return [vec(1, 0), vec(-1, 0), vec(0, 1), vec(0, -1), zero]
    raise ValueError(f"no defining weight system stored for {rs.label}")


# ---------------------------------------------------------------- canonical form


def _kappa(roots, x) -> Fraction:
    return sum((dot(x, a) ** 2 for a in roots), Q(0)) / dot(x, x)


def _components(roots) -> list[list]:
    """Split a root set into mutually orthogonal irreducible pieces."""
    rest = list(roots)
    comps = []
    while rest:
        comp = [rest.pop()]
        grew = True
        while grew:
            grew = False
            for b in list(rest):
                if any(dot(a, b) != 0 for a in comp):
                    comp.append(b)
                    rest.remove(b)
                    grew = True
        comps.append(comp)
    return comps


def canonical_scale(roots) -> Fraction:
    """s with <x,y>_G = s <x,y> solving <x,y>_G = sum_alpha <x,alpha>_G <alpha,y>_G."""
    comps = _components(roots)
    if len(comps) != 1:
        raise ValueError("root system is not simple")
    return 1 / _kappa(roots, roots[0])


def canonical_form(rs: RootSystem) -> list[list[Fraction]]:
    """Gram matrix of the canonical form on the simple roots."""
    s = canonical_scale(rs.roots)
    for a in rs.simple:
        if 1 / _kappa(rs.roots, a) != s:
            raise ValueError("scaling equation has no uniform solution")
    return [[s * g for g in row] for row in rs.gram()]


def strange_formula(rs: RootSystem) -> tuple[Fraction, int]:
    s = canonical_scale(rs.roots)
    return 24 * s * dot(rs.rho, rs.rho), rs.dim_group


def gordon_brown(rs: RootSystem) -> tuple[Fraction, int]:
    s = canonical_scale(rs.roots)
    return 2 * sum((s * dot(a, a) for a in rs.positive), Q(0)), rs.rank


# ---------------------------------------------------------------- homogeneous spaces


@dataclass(frozen=True)
class HomogeneousSpace:
    """G/K with K the centralizer of X0 and a line bundle direction lam.

    alpha^vee(X0) = <alpha^vee, x0> * (2 pi)^two_pi_power.
    """

    name: str
    group: str
    lam: Vec
    x0: Vec
    symmetric: bool
    two_pi_power: int = 0

    @property
    def rs(self) -> RootSystem:
        return root_system(self.group)

    @cached_property
    def sigma_k(self) -> tuple:
        return tuple(a for a in self.rs.roots if dot(a, self.x0) == 0)

    @cached_property
    def sigma_k_pos(self) -> tuple:
        return tuple(a for a in self.rs.positive if dot(a, self.x0) == 0)

    @cached_property
    def psi(self) -> tuple:
        """Positive noncompact roots."""
        return tuple(a for a in self.rs.positive if dot(a, self.x0) != 0)

    @cached_property
    def rho_k(self) -> Vec:
        return _half_sum(self.sigma_k_pos, self.rs.dim)

    @property
    def n(self) -> int:
        return len(self.psi)

    @property
    def dim_k(self) -> int:
        return self.rs.rank + len(self.sigma_k)

    def with_x0(self, x0=None, two_pi_power: int | None = None) -> HomogeneousSpace:
        return HomogeneousSpace(
            self.name, self.group, self.lam, tuple(x0) if x0 is not None else self.x0, self.symmetric,
            self.two_pi_power if two_pi_power is None else two_pi_power,
        )

    def log_coroot_x0(self, alpha):
        """log alpha^vee(X0) as an mpmath number."""
        return mpmath.log(mpq(coroot_pair(alpha, self.x0))) + self.two_pi_power * mpmath.log(2 * mpmath.pi)

    def validate(self) -> None:
        for a in self.psi:
            if dot(a, self.x0) <= 0:
                raise ValueError("X0 is not in the closed positive chamber")
            if coroot_pair(a, self.lam) <= 0:
                raise ValueError("lambda must pair positively with every root in Psi+")
        for b in self.sigma_k:
            if dot(b, self.lam) != 0:
                raise ValueError("lambda must be orthogonal to the isotropy roots")


def _catalogue() -> dict[str, HomogeneousSpace]:
    w1_a1 = vec(Q(1, 2), Q(-1, 2))
    w1_a2 = vec(Q(2, 3), Q(-1, 3), Q(-1, 3))
    w1_a3 = vec(Q(3, 4), Q(-1, 4), Q(-1, 4), Q(-1, 4))
    w2_a3 = vec(Q(1, 2), Q(1, 2), Q(-1, 2), Q(-1, 2))
    rho_a2 = vec(1, 0, -1)
    spaces = [
        HomogeneousSpace("P1", "A1", w1_a1, w1_a1, True),
        HomogeneousSpace("P2", "A2", w1_a2, w1_a2, True),
        HomogeneousSpace("P3", "A3", w1_a3, w1_a3, True),
        HomogeneousSpace("Gr24", "A3", w2_a3, w2_a3, True),
        HomogeneousSpace("SU3/T", "A2", rho_a2, rho_a2, False),
    ]
    out = {s.name: s for s in spaces}
    out["SU2/T"] = out["P1"]
    for s in spaces:
        s.validate()
    return out


CATALOGUE = _catalogue()


def space(name: str) -> HomogeneousSpace:
    try:
        return CATALOGUE[name]
    except KeyError:
        raise ValueError(f"unknown space {name!r}; known: {sorted(CATALOGUE)}") from None


def flag_space(group: str, lam) -> HomogeneousSpace:
    """Full flag variety G/T with line bundle direction lam (strictly dominant)."""
    rs = root_system(group)
    lam = tuple(Q(x) for x in lam)
    sp = HomogeneousSpace(f"{group}/T", group, lam, rs.rho, False)
    sp.validate()
    return sp


def p1_point(phi_pi) -> Vec:
    """Torus point of SU(2) rotating P1 by the angle phi = phi_pi * pi."""
    f = Q(phi_pi)
    return vec(f / 4, -f / 4)


# ---------------------------------------------------------------- characters


def _check_x(rs: RootSystem, X):
    if X is None or all(x == 0 for x in X):
        return None
    X = tuple(Q(x) for x in X)
    if any(dot(a, X).denominator == 1 for a in rs.roots):
        raise ValueError("singular nonzero X unsupported")
    return X


def is_regular(rs: RootSystem, X) -> bool:
    return all(dot(a, X).denominator != 1 for a in rs.roots)


def weyl_denominator(rs: RootSystem, X):
    """prod_{beta>0} 2i sin(pi beta(X))."""
    out = mpmath.mpc(1)
    for b in rs.positive:
        out *= 2j * mpmath.sinpi(mpq(dot(b, X)))
    return out


def _phase(q: Fraction):
    """e^{2 pi i q} for rational q."""
    return mpmath.expjpi(mpq(2 * q))


def character_family(sp: HomogeneousSpace, alpha, X=None) -> ExpPoly:
    """chi_{rho + ell lam + k alpha}(e^X) as an ExpPoly in (k, v = ell)."""
    rs = sp.rs
    X = _check_x(rs, X)
    if X is None:
        return _dimension_poly(rs, sp.lam, alpha)
    out = ExpPoly()
    with mpmath.workdps(WORK_DPS):
        D = weyl_denominator(rs, X)
        for M, sgn in weyl_group(rs):
            c = sgn * _phase(dot(apply(M, rs.rho), X)) / D
            phi = Angle.from_pi(2 * dot(apply(M, alpha), X))
            psi = Angle.from_pi(2 * dot(apply(M, sp.lam), X))
            out._acc(Key(0, 0, phi, psi), c)
    return out


def _dimension_poly(rs: RootSystem, lam, alpha) -> ExpPoly:
    out = ExpPoly.const(Q(1))
    for b in rs.positive:
        r0 = coroot_pair(b, rs.rho)
        lin = ExpPoly({
            Key(0, 0, ZERO, ZERO): Q(1),
            Key(0, 1, ZERO, ZERO): coroot_pair(b, lam) / r0,
            Key(1, 0, ZERO, ZERO): coroot_pair(b, alpha) / r0,
        })
        out = out * lin
    return out


def character_value(rs: RootSystem, mu, X):
    """chi_{rho+mu}(e^X) via the Weyl quotient, or its dimension at X = 0."""
    X = _check_x(rs, X)
    if X is None:
        return weyl_dim_virtual(rs, mu)
    lam = vadd(rs.rho, mu)
    with mpmath.workdps(WORK_DPS):
        num = mpmath.fsum(sgn * _phase(dot(apply(M, lam), X)) for M, sgn in weyl_group(rs))
        return num / weyl_denominator(rs, X)


def k_character(sp: HomogeneousSpace, mu, X):
    """Character of K with label rho_K + mu at e^X (Weyl quotient over W_K)."""
    X = tuple(Q(x) for x in X)
    wk = weyl_group_of(sp.sigma_k_pos, sp.rs.dim)
    lam = vadd(sp.rho_k, mu)
    with mpmath.workdps(WORK_DPS):
        num = mpmath.fsum(s * _phase(dot(apply(M, lam), X)) for M, s in wk)
        den = mpmath.fsum(s * _phase(dot(apply(M, sp.rho_k), X)) for M, s in wk)
        return num / den


def character_rho_ell(sp: HomogeneousSpace, X=None) -> ExpPoly:
    """chi_{rho + ell lam}(e^X) as a polynomial in ell."""
    return character_family(sp, sp.psi[0], X).at_k0()


# ---------------------------------------------------------------- structural constants


def space_constants(sp: HomogeneousSpace) -> dict:
    """c_lambda, the ratio of canonical forms of G and K, and n = dim_C G/K.

    Raises if any of the accompanying identities fails.
    """
    if not sp.symmetric:
        raise ValueError("space constants need a symmetric space")
    s = canonical_scale(sp.rs.roots)
    a0 = sp.psi[0]
    c_lam = 1 / (4 * s * dot(a0, sp.lam))
    n = sp.n
    diff = vadd(sp.rs.rho, vscale(-1, sp.rho_k))
    if c_lam != Q(n) / (8 * s * dot(sp.lam, diff)):
        raise ArithmeticError("c_lambda formulas disagree")
    if diff != vscale(c_lam, sp.lam):
        raise ArithmeticError("rho - rho_K is not a multiple of lambda")
    if s * dot(sp.rs.rho, sp.rs.rho) != s * dot(sp.rho_k, sp.rho_k) + Q(n, 8):
        raise ArithmeticError("norm identity for rho fails")
    out = {"c_lambda": c_lam, "n": n, "killing_ratio": None}
    if sp.dim_k > 1 and sp.sigma_k:
        out["killing_ratio"] = killing_ratio(sp)
    return out


def killing_ratio(sp: HomogeneousSpace) -> Fraction:
    """||beta||_G^2 / ||beta||_K^2 for isotropy roots beta, computed per factor of K."""
    if not sp.sigma_k:
        raise ValueError("ratio undefined when K has no roots")
    s = canonical_scale(sp.rs.roots)
    ratios = set()
    for comp in _components(sp.sigma_k):
        sk = 1 / _kappa(comp, comp[0])
        ratios.add(s / sk)
    if len(ratios) != 1:
        raise ArithmeticError("isotropy factors have different ratios")
    return ratios.pop()


def killing_ratio_closed(sp: HomogeneousSpace) -> Fraction:
    dk, dg = sp.dim_k, sp.rs.dim_group
    return Q(3 * dk - dg, 2 * (dk - 1))


def dimension_count_identity(sp: HomogeneousSpace) -> tuple[Fraction, int]:
    """(4 sum <a,rho_K>_G <b^vee,a>/<b^vee,rho_K> + 2 sum ||a||_G^2, n) over a in Psi+, b in Sigma_K+."""
    s = canonical_scale(sp.rs.roots)
    t = Q(0)
    for a in sp.psi:
        for b in sp.sigma_k_pos:
            t += s * dot(a, sp.rho_k) * coroot_pair(b, a) / coroot_pair(b, sp.rho_k)
    lhs = 4 * t + 2 * sum((s * dot(a, a) for a in sp.psi), Q(0))
    return lhs, sp.n


def weighted_dimension_sum(rs: RootSystem, weights, k: int) -> Fraction:
    """sum_j <alpha_j, rho> dim(rho + k alpha_j); affine-linear in k."""
    return sum((dot(a, rs.rho) * weyl_dim_virtual(rs, vscale(k, a)) for a in weights), Q(0))


# ---------------------------------------------------------------- exact torsion


def _star_mp(P: ExpPoly, p: int):
    """P*(p) = -sum c p^{n+1} H_n / (4(n+1)) over the non-oscillating terms."""
    out = mpmath.mpc(0)
    for k, c in P:
        if k.phi.is_zero:
            out += -to_mp(c) * mpmath.mpf(p) ** (k.n + 1) * mpq(harmonic(k.n)) / (4 * (k.n + 1))
    return out


def _zeta_mp(P: ExpPoly):
    z = zeta_op(P)
    return z.eval_mp(0, 1) if not z.is_zero() else mpmath.mpc(0)


def _pairing_int(alpha, mu) -> int:
    p = coroot_pair(alpha, mu)
    if p.denominator != 1:
        raise ValueError("non-integer pairing <alpha^vee, rho + ell lam>")
    return int(p)


def torsion_symmetric_exact(sp: HomogeneousSpace, ell: int, X=None, tol: float = 1e-12) -> BoundedValue:
    """Exact equivariant torsion of O(ell) on a symmetric space, as a finite formula in zeta values."""
    if not sp.symmetric:
        raise ValueError("exact formula needs a symmetric space")
    rs = sp.rs
    top = vadd(rs.rho, vscale(ell, sp.lam))
    per = tol / (4 * len(sp.psi))
    err = 0.0
    with mpmath.workdps(WORK_DPS):
        total = mpmath.mpc(0)
        chi0 = character_rho_ell(sp, X).eval_mp(0, ell)
        for a in sp.psi:
            p = _pairing_int(a, top)
            Pm = character_family(sp, a, X).reflect().at_v(ell).map_coeffs(to_mp)
            zp = zeta_prime_op(Pm.odd(), per)
            total += -2 * mpmath.mpc(zp.value)
            err += 2 * zp.bound
            total += -2 * _star_mp(Pm, p)
            lx = sp.log_coroot_x0(a)
            total += -_zeta_mp(Pm) * lx
            total += -chi0 * lx
            if p >= 2:
                total += -mpmath.fsum(Pm.eval_mp(k) * mpmath.log(k) for k in range(2, p + 1))
        value = complex(total)
    return BoundedValue(value, err + 2 * _U * abs(value) + 1e-25 * (1 + abs(value)))


# ---------------------------------------------------------------- asymptotic expansions


def _log_terms(P: ExpPoly, const) -> list[AsymTerm]:
    """-zeta(P) * (log ell + const) as expansion terms in ell."""
    z = -zeta_op(P)
    return _v_terms(z, 1) + _v_terms(z * const)


def _require_pairings(sp: HomogeneousSpace):
    rs = sp.rs
    out = []
    for a in sp.psi:
        c = coroot_pair(a, sp.lam)
        r = coroot_pair(a, rs.rho)
        if c.denominator != 1 or r.denominator != 1 or c <= 0:
            raise ValueError("pairings with Psi+ must be positive integers")
        out.append((a, int(c), int(r)))
    return out


def torsion_symmetric_asymptotic(sp: HomogeneousSpace, ell: int, X=None, N: int = 8,
                                 tol: float = 1e-20) -> AsymptoticValue:
    """Large-ell expansion of the equivariant torsion of O(ell), truncated at ell-degree > -N."""
    if not sp.symmetric:
        raise ValueError("this expansion needs a symmetric space")
    if N < 1:
        raise ValueError("N must be positive")
    terms: list[AsymTerm] = []
    ledger: dict[str, list] = {"log": [], "zeta_prime": [], "log_dagger": []}
    rb = 0.0
    cerr = 0.0
    with mpmath.workdps(WORK_DPS + N + 10):
        for a, c, r in _require_pairings(sp):
            P = character_family(sp, a, X).map_coeffs(to_mp)
            g1 = _log_terms(P, mpmath.log(c) - sp.log_coroot_x0(a))
            zp, zerr = zeta_prime_poly(P, ell, tol)
            g2 = _v_terms(zp)
            g3 = _v_terms(-zeta_op(log_dagger_truncate(P, N, (r, c))))
            ledger["log"] += g1
            ledger["zeta_prime"] += g2
            ledger["log_dagger"] += g3
            terms += g1 + g2 + g3
            cerr += zerr
            rb += zeta_r_bound(P, r, ell, N, scale=c)
        return AsymptoticValue(collect(terms), ell, rb, cerr, ledger=ledger)


def _reject_unknown_constant(sp: HomogeneousSpace):
    if sp.group.startswith(("G2", "F4", "E8")):
        raise ValueError("groups with a G2, F4 or E8 factor are not supported: the extra constant is unknown")


def flag_remainder_bound(sp: HomogeneousSpace, ell: int, X, N: int) -> float:
    rs = sp.rs
    W = weyl_group(rs)
    with mpmath.workdps(WORK_DPS):
        D = abs(weyl_denominator(rs, X))
    total = 0.0
    for a, c, r in _require_pairings(sp):
        s = 0.0
        for M, _ in W:
            ang = Angle.from_pi(2 * dot(apply(M, a), X))
            s += remainder_bound_C(ang, N, r + 1)
        total += s / N * float(c) ** (-N)
    return total * float(ell) ** (-N) / float(D) * (1 + 1e-12)


def torsion_flag_asymptotic(sp: HomogeneousSpace, ell: int, X, N: int = 8,
                            tol: float = 1e-20) -> AsymptoticValue:
    """Expansion of the equivariant torsion at a regular torus point (isolated fixed points)."""
    _reject_unknown_constant(sp)
    X = _check_x(sp.rs, X)
    if X is None:
        raise ValueError("X must be regular")
    terms: list[AsymTerm] = []
    ledger: dict[str, list] = {"log_ell": [], "zeta_prime": [], "log_lambda": [], "middle": []}
    cerr = 0.0
    with mpmath.workdps(WORK_DPS + N + 10):
        total_P = ExpPoly()
        for a, c, r in _require_pairings(sp):
            P = character_family(sp, a, X)
            total_P = total_P + P
            g = _v_terms(-zeta_op(P) * (mpmath.log(c) - sp.log_coroot_x0(a)))
            ledger["log_lambda"] += g
            mid = ExpPoly()
            for m in range(1, N):
                den = (-c) ** m * m
                for k, coef in P:
                    z = k.phi.mp_unit() * _mp_phi_neg_int(k.phi, m, r + 1)
                    mid._acc(Key(0, -m, ZERO, k.psi), to_mp(coef) * z / den)
            ledger["middle"] += _v_terms(mid)
        ledger["log_ell"] = _v_terms(-zeta_op(total_P), 1)
        zp, cerr = zeta_prime_poly(total_P, ell, tol)
        ledger["zeta_prime"] = _v_terms(zp)
        for g in ledger.values():
            terms += g
        rb = flag_remainder_bound(sp, ell, X, N)
        return AsymptoticValue(collect(terms), ell, rb, cerr, ledger=ledger)


def fixed_point_leading(sp: HomogeneousSpace, ell: int, X) -> complex:
    """sum over isolated fixed points of Td* ch: the coefficient of log ell."""
    rs = sp.rs
    X = _check_x(rs, X)
    if X is None:
        raise ValueError("X must be regular")
    wk = len(weyl_group_of(sp.sigma_k_pos, rs.dim))
    with mpmath.workdps(WORK_DPS):
        total = mpmath.mpc(0)
        for M, _ in weyl_group(rs):
            inv = [1 / (1 - _phase(-dot(apply(M, a), X))) for a in sp.psi]
            term = _phase(ell * dot(apply(M, sp.lam), X)) * mpmath.fprod(inv) * mpmath.fsum(inv)
            total += term
        return complex(total / wk)


# ---------------------------------------------------------------- Jantzen filtration sum


def jantzen_exact(sp: HomogeneousSpace, ell: int, X=None):
    """-sum_{alpha>0} sum_{k=1}^{<alpha^vee, rho+ell lam>-1} chi_{rho+ell lam-k alpha}(e^X) log k."""
    rs = sp.rs
    top = vadd(rs.rho, vscale(ell, sp.lam))
    with mpmath.workdps(WORK_DPS):
        total = mpmath.mpc(0)
        for a in sp.psi:
            p = _pairing_int(a, top)
            for k in range(2, p):
                total -= to_mp(character_value(rs, vadd(vscale(ell, sp.lam), vscale(-k, a)), X)) * mpmath.log(k)
        return total


def jantzen_log_coefficients(sp: HomogeneousSpace, ell: int) -> dict[int, Fraction]:
    """The exact side at X = 0 as an integer combination of log k."""
    rs = sp.rs
    top = vadd(rs.rho, vscale(ell, sp.lam))
    out: dict[int, Fraction] = {}
    for a in sp.psi:
        for k in range(2, _pairing_int(a, top)):
            c = -weyl_dim_virtual(rs, vadd(vscale(ell, sp.lam), vscale(-k, a)))
            if c:
                out[k] = out.get(k, Q(0)) + c
    return {k: c for k, c in out.items() if c}


def _log_dagger_const_tail(P: ExpPoly, N: int, a: int, c: int, ell: int) -> float:
    """Bound on the part of P(ell) log‡(a/(c ell)+1) dropped by the degree cut."""
    x = a / (c * ell)
    if a == 0:
        return 0.0
    if x >= 1:
        raise ValueError("ell too small for the log series")
    total = 0.0
    for k, coef in P:
        j0 = max(1, k.r + N)
        total += abs(complex(coef)) * float(ell) ** k.r * x**j0 / (j0 * (1 - x))
    return total


def jantzen_asymptotic(sp: HomogeneousSpace, ell: int, X=None, N: int = 8,
                       tol: float = 1e-20) -> AsymptoticValue:
    """Large-ell expansion of the Jantzen sum with certified remainder."""
    X = _check_x(sp.rs, X)
    terms: list[AsymTerm] = []
    ledger: dict[str, list] = {k: [] for k in ("tilde_star", "res", "log", "zeta_prime", "log_dagger", "rho_log_dagger")}
    rb = 0.0
    cerr = 0.0
    with mpmath.workdps(WORK_DPS + N + 10):
        chi0 = character_rho_ell(sp, X).map_coeffs(to_mp)
        for a, c, r in _require_pairings(sp):
            Pp = character_family(sp, a, X).map_coeffs(to_mp)
            Pm = Pp.reflect()
            res2, tilde, _ = structural_polys(Pm, r, scale=c)
            logc = mpmath.log(c)
            g_tilde = _v_terms(tilde * 2)
            # vanishes by the skew symmetry of k -> chi_{rho+ell lam-k alpha}
            g_res = _v_terms(-res2, 1) + _v_terms(-res2 * logc) + _v_terms(-log_dagger_const(res2, N, r, c))
            zm = zeta_op(Pm)
            g_log = _v_terms(zm, 1) + _v_terms(zm * logc)
            zp, zerr = zeta_prime_poly(Pm, ell, tol)
            g_zp = _v_terms(zp)
            g_ld = _v_terms(-zeta_op(log_dagger_truncate(Pp, N, (r, c))))
            g_rho = _v_terms(-log_dagger_const(chi0, N, r, c))
            for name, g in (("tilde_star", g_tilde), ("res", g_res), ("log", g_log),
                            ("zeta_prime", g_zp), ("log_dagger", g_ld), ("rho_log_dagger", g_rho)):
                ledger[name] += g
                terms += g
            cerr += zerr
            rb += zeta_r_bound(Pp, r, ell, N, scale=c) + _log_dagger_const_tail(chi0, N, r, c, ell)
        return AsymptoticValue(collect(terms), ell, rb, cerr, ledger=ledger)


def jantzen_pair(group: str, lam, ell: int, X=None, N: int = 8, tol: float = 1e-20) -> dict:
    sp = flag_space(group, lam)
    return {"exact": complex(jantzen_exact(sp, ell, X)), "asymptotic": jantzen_asymptotic(sp, ell, X, N, tol)}


# ---------------------------------------------------------------- non-equivariant coefficients


def finski_coefficients(name: str, ell: int = 100, N: int = 4) -> dict:
    """Coefficients of ell^n log ell, ell^{n-1} log ell and ell^{n-1} at X = 0, X0 = lam/2pi.

    Returned next to the closed-form targets for projective space P^n.
    """
    if name not in ("P1", "P2"):
        raise ValueError("supported spaces: P1, P2")
    sp = space(name).with_x0(two_pi_power=-1)
    n = sp.n
    av = torsion_symmetric_asymptotic(sp, ell, None, N)
    with mpmath.workdps(WORK_DPS):
        zp1 = zeta_prime_op(ExpPoly.term(1, 1), 1e-20).value
        const = (24 * mpmath.mpf(zp1.real) + 2 * mpmath.log(2 * mpmath.pi) + 7) / 24
        targets = {
            "c_top_log": Q(n, 2) / math.factorial(n),
            "c_sub_log": Q(3 * n + 1, 12) * (n + 1) / math.factorial(n - 1),
            "c_sub_const": complex(const * (n + 1) / math.factorial(n - 1)),
        }
        got = {
            "c_top_log": complex(av.coefficient(n, 1)),
            "c_sub_log": complex(av.coefficient(n - 1, 1)),
            "c_sub_const": complex(av.coefficient(n - 1, 0)),
        }
    return {"n": n, "coefficients": got, "targets": targets}


def regular_point(rs: RootSystem, rng, denom: int = 97) -> Vec:
    """A random rational torus point with every root pairing non-integral."""
    while True:
        X = tuple(Q(rng.randrange(1, 4 * denom), denom) for _ in range(rs.dim))
        if is_regular(rs, X):
            return X
