import math
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from torsionkit import liealg, torsion_p1
from torsionkit.liealg import vadd, vscale

# Frozen from mpmath: the closed rotation formula with lerchphi s-derivatives,
# and 2 (24 zeta'(-1) + 2 log 2pi + 7) / 24.
P1_PI3_100 = 9.1093041775334797077
P1_CONST = 0.5588038903339890555


@pytest.mark.parametrize("label,size", [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("G2", 12)])
def test_weyl_group_sizes(label, size):
    assert len(liealg.weyl_group(liealg.root_system(label))) == size


def test_weyl_dimension():
    a1, a2 = liealg.root_system("A1"), liealg.root_system("A2")
    assert liealg.weyl_dim_virtual(a2, (0, 0, 0)) == 1
    assert liealg.weyl_dim_virtual(a1, (Q(1, 2), Q(-1, 2))) == 2
    assert liealg.weyl_dim_virtual(a2, a2.rho) == 8


def test_weyl_dimension_is_limit_of_characters():
    rs = liealg.root_system("A2")
    X0 = liealg.regular_point(rs, random.Random(3))
    mu = (2, 1, -3)
    eps = Q(1, 10**7)
    val = liealg.character_value(rs, mu, tuple(eps * x for x in X0))
    assert abs(complex(val) - float(liealg.weyl_dim_virtual(rs, mu))) <= 1e-8 * 100


def test_singular_point_rejected():
    with pytest.raises(ValueError):
        liealg.character_value(liealg.root_system("A1"), (0, 0), (Q(1, 2), Q(-1, 2)))


@pytest.mark.parametrize("f", [Q(1, 3), Q(1, 2), Q(5, 7)])
def test_p1_characters_are_sine_quotients(f):
    sp = liealg.space("P1")
    alpha = sp.psi[0]
    fam = liealg.character_family(sp, alpha, liealg.p1_point(f))
    phi = float(f) * math.pi
    for ell in (0, 3, 10):
        P = fam.at_v(ell)
        for k in (-2, 0, 5):
            want = math.sin((ell + 2 * k + 1) * phi / 2) / math.sin(phi / 2)
            assert P.eval(k) == pytest.approx(want, abs=1e-12)


def test_p1_dimension_polynomial():
    sp = liealg.space("P1")
    P = liealg.character_family(sp, sp.psi[0])
    for ell in (0, 4):
        for k in (-3, 2):
            assert P.at_v(ell).eval(k) == ell + 2 * k + 1


def test_canonical_form_identities():
    a1 = liealg.root_system("A1")
    assert liealg.canonical_form(a1) == [[Q(1, 2)]]
    assert 24 * liealg.canonical_scale(a1.roots) * liealg.dot(a1.rho, a1.rho) == 3
    for label in ("A1", "A2", "A3", "B2", "G2"):
        rs = liealg.root_system(label)
        assert liealg.strange_formula(rs)[0] == liealg.strange_formula(rs)[1]
        assert liealg.gordon_brown(rs)[0] == liealg.gordon_brown(rs)[1]


def test_space_constants():
    assert liealg.killing_ratio(liealg.space("Gr24")) == Q(1, 2)
    c = liealg.space_constants(liealg.space("P2"))
    assert c["n"] == 2
    for name in ("P1", "P2", "Gr24"):
        lhs, n = liealg.dimension_count_identity(liealg.space(name))
        assert lhs == n


@given(st.sampled_from(["P1", "P2", "Gr24", "SU3/T"]), st.integers(0, 40), st.integers(0, 5))
def test_reflection_symmetry_of_character_families(name, ell, idx):
    sp = liealg.space(name)
    alpha = sp.psi[idx % len(sp.psi)]
    c = int(liealg.coroot_pair(alpha, vadd(sp.rs.rho, vscale(ell, sp.lam))))
    P = liealg.character_family(sp, alpha).at_v(ell)
    assert P.reflect() == -P.shift(-c)


def test_symmetric_exact_matches_rotation_formula():
    b = liealg.torsion_symmetric_exact(liealg.space("P1"), 100, liealg.p1_point(Q(1, 3)))
    assert abs(b.value.real - P1_PI3_100) <= b.bound + 1e-12
    b = liealg.torsion_symmetric_exact(liealg.space("P1"), 0, liealg.p1_point(1))
    assert abs(b.value) <= b.bound + 1e-15


def test_symmetric_expansion_p2():
    sp = liealg.space("P2")
    ex = liealg.torsion_symmetric_exact(sp, 5)
    asy = liealg.torsion_symmetric_asymptotic(sp, 5, None, 10)
    assert abs(ex.value - asy.value) <= ex.bound + asy.bound


@pytest.mark.parametrize("ell", [50, 100, 200])
def test_symmetric_expansion_p1_rotation(ell):
    sp = liealg.space("P1")
    X = liealg.p1_point(Q(1, 3))
    ex = liealg.torsion_symmetric_exact(sp, ell, X)
    asy = liealg.torsion_symmetric_asymptotic(sp, ell, X, 10)
    assert abs(ex.value - asy.value) <= ex.bound + asy.bound


def test_fixed_point_leading_term():
    sp = liealg.space("P1")
    for f, ell in ((Q(1), 0), (Q(1, 3), 7), (Q(2, 5), 12)):
        phi = float(f) * math.pi
        want = math.cos((ell + 2) * phi / 2) / (-2 * math.sin(phi / 2) ** 2)
        assert liealg.fixed_point_leading(sp, ell, liealg.p1_point(f)).real == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("name", ["P1", "SU3/T"])
def test_flag_log_coefficient_is_fixed_point_sum(name):
    sp = liealg.space(name)
    X = liealg.regular_point(sp.rs, random.Random(5))
    asy = liealg.torsion_flag_asymptotic(sp, 40, X, 6)
    got = complex(asy.coefficient_at(0, 1))
    assert abs(got - liealg.fixed_point_leading(sp, 40, X)) <= 1e-9


def test_flag_expansion_self_consistent():
    sp = liealg.space("SU3/T")
    X = liealg.regular_point(sp.rs, random.Random(5))
    a6 = liealg.torsion_flag_asymptotic(sp, 100, X, 6)
    a10 = liealg.torsion_flag_asymptotic(sp, 100, X, 10)
    assert abs(a6.value - a10.value) <= a6.bound


def test_g2_flag_rejected():
    sp = liealg.flag_space("G2", liealg.root_system("G2").rho)
    X = liealg.regular_point(sp.rs, random.Random(1))
    with pytest.raises(ValueError):
        liealg.torsion_flag_asymptotic(sp, 10, X)


def test_jantzen():
    sp = liealg.flag_space("A1", (Q(1, 2), Q(-1, 2)))
    assert liealg.jantzen_log_coefficients(sp, 3) == {3: 2}
    assert complex(liealg.jantzen_exact(sp, 3)).real == pytest.approx(2 * math.log(3), abs=1e-14)
    for group, lam, ell in (("A1", (Q(1, 2), Q(-1, 2)), 40), ("A2", (1, 0, -1), 20)):
        pair = liealg.jantzen_pair(group, lam, ell, None, 8)
        assert abs(pair["exact"] - pair["asymptotic"].value) <= pair["asymptotic"].bound


def test_non_equivariant_constants():
    p1 = liealg.finski_coefficients("P1")["coefficients"]
    assert p1["c_top_log"] == pytest.approx(0.5, abs=1e-6)
    assert p1["c_sub_const"].real == pytest.approx(P1_CONST, abs=1e-6)
    p2 = liealg.finski_coefficients("P2")["coefficients"]
    assert p2["c_sub_log"] == pytest.approx(7 / 4, abs=1e-6)


def test_p1_agrees_across_modules():
    inp = torsion_p1.P1Input(30, phi_pi=Q(2, 3))
    a = torsion_p1.p1_exact(inp)
    b = liealg.torsion_symmetric_exact(liealg.space("P1"), 30, liealg.p1_point(Q(2, 3)))
    assert abs(a.value - b.value) <= a.bound + b.bound
