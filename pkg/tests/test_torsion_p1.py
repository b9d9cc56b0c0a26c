import math
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from torsionkit import lerch, torsion_forms, torsion_p1
from torsionkit.exppoly import evaluate_terms
from torsionkit.torsion_p1 import P1Input

# Frozen from mpmath (lerchphi s-derivatives, si, ci, direct sums).
P1_PI2_7 = -0.92191979658538617975
LIE_SUM_ELL2 = 2.978924974872963017
SICI = {10: (1.6583475942188740493, -0.045456433004455372635), 50: (1.5516170724859358947, -0.0056283863241163054402)}


def test_exact_vanishing_cases():
    for ell in (0, 1):
        b = torsion_p1.p1_exact(P1Input(ell, phi_pi=1))
        assert abs(b.value) <= b.bound + 1e-15


def test_exact_against_oracle_and_duality():
    a = torsion_p1.p1_exact(P1Input(7, phi_pi=Q(1, 2)))
    b = torsion_p1.p1_exact(P1Input(-9, phi_pi=Q(1, 2)))
    assert abs(a.value.real - P1_PI2_7) <= a.bound + 1e-13
    assert abs(a.value - b.value) <= a.bound + b.bound


@given(st.integers(2, 60), st.sampled_from([Q(1, 3), Q(1, 2), Q(3, 4), Q(7, 5)]))
def test_duality_property(l0, f):
    a = torsion_p1.p1_exact(P1Input(-l0, phi_pi=f))
    b = torsion_p1.p1_exact(P1Input(l0 - 2, phi_pi=f))
    assert abs(a.value - b.value) <= a.bound + b.bound


def test_leading_coefficients():
    phi, ell = 1.0, 80
    asy = torsion_p1.p1_asymptotic(P1Input(ell, phi=phi))
    want = math.cos((ell + 2) * phi / 2) / (-2 * math.sin(phi / 2) ** 2)
    assert complex(asy.coefficient_at(0, 1)).real == pytest.approx(want, abs=1e-12)
    rrot = lerch.digamma_and_rrot(phi)[1]
    got = complex(evaluate_terms(asy.ledger["rrot"], ell)).real
    assert got == pytest.approx(math.cos((ell + 1) * phi / 2) / math.sin(phi / 2) * rrot, abs=1e-10)


@pytest.mark.parametrize("ell", [50, 100, 200])
def test_expansion_within_bound(ell):
    inp = P1Input(ell, phi=1.0, N=10)
    ex, asy = torsion_p1.p1_exact(inp), torsion_p1.p1_asymptotic(inp)
    assert abs(ex.value - asy.value) <= ex.bound + asy.bound


def test_metric_scale_enters_through_log():
    a = torsion_p1.p1_exact(P1Input(20, phi_pi=Q(1, 3), x0=Q(3)))
    b = torsion_p1.p1_exact(P1Input(20, phi_pi=Q(1, 3)))
    phi = math.pi / 3
    shift = math.cos(22 * phi / 2) / (2 * math.sin(phi / 2) ** 2) * math.log(3)
    assert a.value.real - b.value.real == pytest.approx(shift, abs=1e-12)
    asy = torsion_p1.p1_asymptotic(P1Input(20, phi_pi=Q(1, 3), x0=Q(3), N=12))
    assert abs(asy.value - a.value) <= asy.bound + a.bound


def test_lie_series_parts():
    parts = torsion_p1.lie_series_parts(2, 1.0)
    assert parts["log_sum"].value.real == pytest.approx(LIE_SUM_ELL2, abs=1e-13)
    a = torsion_p1.lie_series(30, 1.0, 40)
    b = torsion_p1.lie_series(30, 1.0, 50)
    assert abs(a.value - b.value) <= a.bound + b.bound
    with pytest.raises(ValueError):
        torsion_p1.lie_series(3, 1.0, 401)


def test_sharp_series_at_small_t():
    # t -> 0: the sharp sum reduces to its m = 0 term -B_2(-ell/2)(2 H_1 - H_0)/2 times 2
    ell = 6
    c0 = torsion_p1.sharp_coefficient(ell, 0)
    b2 = Q(ell * ell, 4) + Q(ell, 2) + Q(1, 6)
    assert c0 == -b2 * 2


def test_series_grouping_of_coefficients():
    for ell in (0, 2, 5):
        cs = torsion_p1.lie_series_coefficients(ell, 3)
        for m in range(4):
            t = torsion_forms.t_coeff_exact(ell, m).value.real
            assert float(cs[m]) == pytest.approx(2 * (-1) ** m / math.factorial(2 * m + 1) * t, abs=1e-9)


@pytest.mark.parametrize("x", [10, 50])
def test_sici(x):
    si, ci, err = torsion_p1.sici(x)
    assert abs(si - SICI[x][0]) <= err + 1e-15
    assert abs(ci - SICI[x][1]) <= err + 1e-15


def test_integrand_is_finite_at_endpoints():
    for t in (0.5, 1.0, 3.0):
        for r in (-1.0, 1.0):
            assert math.isfinite(torsion_p1.f_aux(r, t))
        assert torsion_p1.f_aux(1.0, t) == pytest.approx(torsion_p1.f_aux(1 - 1e-6, t), abs=1e-5)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_f_derivatives_agree_with_series(m):
    t = 1.0
    assert torsion_p1.f_derivative_at_one(m, t) == pytest.approx(torsion_p1.f_derivative_series(m, t), rel=1e-6, abs=1e-9)


def test_oracle_matches_series_and_decomposition():
    ell, t = 30, 1.0
    oracle = torsion_p1.oscillatory_integral_oracle(ell, t)
    assert oracle == pytest.approx(torsion_p1.lie_series_parts(ell, t, 80)["sharp"].value.real, abs=1e-7)
    assert float(torsion_p1.sharp_decomposition(ell, t)["total"]) == pytest.approx(oracle, abs=1e-8)


def test_lie_expansion_converges():
    errs = []
    for L in (50, 100, 200):
        oracle = torsion_p1.oscillatory_integral_oracle(L - 1, 1.0)
        sharp = torsion_p1.lie_asymptotic(L - 1, 1.0, 4)["sharp"]
        errs.append(abs(sharp.value.real - oracle))
        assert errs[-1] <= sharp.bound + 1e-10
    assert errs[0] / errs[1] >= 3 and errs[1] / errs[2] >= 3


def test_lie_expansion_brackets():
    for L in (40, 80):
        oracle = torsion_p1.oscillatory_integral_oracle(L - 1, 1.0)
        for N in (4, 6):
            sharp = torsion_p1.lie_asymptotic(L - 1, 1.0, N)["sharp"]
            assert abs(sharp.value.real - oracle) <= sharp.bound + 1e-10


def test_lie_total_matches_series():
    ell, t = 99, 1.0
    total = torsion_p1.lie_asymptotic(ell, t, 6)["total"]
    series = torsion_p1.lie_series(ell, t, 80)
    assert abs(total.value - series.value) <= total.bound + series.bound + 1e-9


def test_input_validation():
    with pytest.raises(ValueError):
        P1Input(3)
    with pytest.raises(ValueError):
        P1Input(3, phi_pi=2)
    with pytest.raises(ValueError):
        torsion_p1.lie_asymptotic(0, 1.0)
