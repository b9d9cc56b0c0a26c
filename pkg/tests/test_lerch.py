import math
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from torsionkit import lerch
from torsionkit.lerch import Angle, ToleranceUnreachable

# Frozen from mpmath (lerchphi with numerical s-derivative, zeta(s, derivative=1),
# digamma) at 30 digits.
ZETA_PRIME_M1 = -0.16542114370045092921
ZETA_PRIME_M3 = 0.0053785763577743011444
DPHI_06_1_51 = complex(-86.14059921945340039, -324.02781104962240298)
DPHI_03TAU_2_51 = complex(-4940.6761701961939035, -3713.5509721102688924)
DPHI_PI_0_1 = 0.22579135264472743236
DPHI_PI_3_21 = -12981.045111878495637
ROT_05 = complex(2.2264810975368454471, -0.31468580490979662388)
ROT_50 = complex(0.33120753523472835786, -0.42997224404020056947)


def test_phi_neg_int_examples():
    assert lerch.phi_neg_int(Angle.from_pi(1), 0, 1) == pytest.approx(0.5)
    assert lerch.phi_neg_int(Angle.from_pi(0), 1, 1) == pytest.approx(-1 / 12)
    assert lerch.phi_neg_int(Angle.from_pi(Q(1, 2)), 1, 1) == pytest.approx(0.5j)


@given(st.floats(0.1, 3.1), st.integers(0, 6), st.integers(0, 6))
def test_phi_shift(phi, m, a):
    z = Angle.from_float(phi)
    lhs = z.unit() * lerch.phi_neg_int(z, m, a + 1)
    rhs = lerch.phi_neg_int(z, m, a) - (a**m if (a or m == 0) else 0)
    if a == 0 and m == 0:
        rhs = lerch.phi_neg_int(z, m, a) - 1
    assert abs(lhs - rhs) <= 1e-12 * max(1, abs(rhs))


def test_hurwitz_values():
    for s, a, want in ((2, 1, math.pi**2 / 6), (2, 0.5, math.pi**2 / 2), (3, 2, 0.2020569031595942854)):
        b = lerch.hurwitz_zeta(s, a)
        assert abs(b.value.real - want) <= b.bound + 1e-15


def test_remainder_constant_examples():
    assert lerch.remainder_bound_C(Angle.from_pi(0), 3, 1) == pytest.approx(1 / 120, rel=1e-9)
    assert lerch.remainder_bound_C(Angle.from_pi(1), 1, 1) == pytest.approx(1 / 4, rel=1e-9)
    # the Faulhaber part vanishes for a in {0, 1}
    assert lerch.remainder_bound_C(Angle.from_pi(0), 4, 0) == pytest.approx(lerch.remainder_bound_C(Angle.from_pi(0), 4, 1))


def test_asymptotic_at_trivial_angle_has_stirling_shape():
    v, N = 200, 2
    b = lerch.lerch_sderiv_asymptotic(Angle.from_pi(0), 0, v, 1, N)
    shape = v * math.log(v) - v + 0.5 * math.log(v) - lerch.phi_neg_int(Angle.from_pi(0), 1, 1) / v
    assert abs(b.value - shape) <= b.bound + 1e-9


def test_asymptotic_stirling_at_ten():
    b = lerch.lerch_sderiv_asymptotic(Angle.from_pi(0), 0, 10, 1, 8)
    want = math.lgamma(11) - 0.5 * math.log(2 * math.pi)
    assert abs(b.value.real - want) <= b.bound


def test_reference_against_oracle():
    cases = [
        (Angle.from_float(0.6), 1, 51, DPHI_06_1_51),
        (Angle.from_pi(Q(3, 5)), 2, 51, DPHI_03TAU_2_51),
        (Angle.from_pi(1), 0, 1, DPHI_PI_0_1),
        (Angle.from_pi(1), 3, 21, DPHI_PI_3_21),
    ]
    for z, n, v0, want in cases:
        b = lerch.lerch_sderiv_reference(z, n, v0, 1e-12)
        assert abs(b.value - want) <= b.bound + 1e-12 * abs(want)


def test_asymptotic_matches_reference():
    z = Angle.from_pi(Q(3, 5))
    b = lerch.lerch_sderiv_asymptotic(z, 2, 50, 1, 10)
    r = lerch.lerch_sderiv_reference(z, 2, 51, 1e-12)
    assert abs(b.value - r.value) <= b.bound + r.bound


def test_reference_anchors():
    b = lerch.lerch_sderiv_reference(Angle.from_pi(0), 0, 5, 1e-9)
    assert abs(b.value.real - (math.log(24) - 0.5 * math.log(2 * math.pi))) <= 1e-9
    assert abs(lerch.zeta_prime_neg(1).value.real - ZETA_PRIME_M1) <= 1e-12
    assert abs(lerch.zeta_prime_neg(3).value.real - ZETA_PRIME_M3) <= 1e-12
    z3 = 1.2020569031595942854
    b = lerch.lerch_sderiv_reference(Angle.from_pi(0), 2, 1, 1e-10)
    assert abs(b.value.real + z3 / (4 * math.pi**2)) <= 1e-9


def test_reference_real_part_through_digamma():
    b = lerch.lerch_sderiv_reference(Angle.from_pi(1), 0, 1, 1e-10)
    gamma = 0.57721566490153286061
    want = (-math.log(2 * math.pi) - gamma) / 2 - lerch.digamma(0.5) / 2
    assert abs(-b.value.real - want) <= 1e-10


def test_digamma_half():
    psi_half, rrot = lerch.digamma_and_rrot(math.pi)
    gamma = 0.57721566490153286061
    assert psi_half == pytest.approx((-gamma - 2 * math.log(2)) / 2, abs=1e-12)
    assert abs(rrot) < 1e-12


@pytest.mark.parametrize("phi,want", [(0.5, ROT_05), (math.pi, complex(-DPHI_PI_0_1, 0)), (5.0, ROT_50)])
def test_rotation_constants(phi, want):
    psi_half, rrot = lerch.digamma_and_rrot(phi)
    gamma = 0.57721566490153286061
    assert (-math.log(2 * math.pi) - gamma) / 2 - psi_half == pytest.approx(want.real, abs=1e-8)
    assert lerch.rrot_real_part(phi) == pytest.approx(want.real, abs=1e-8)
    assert rrot == pytest.approx(want.imag, abs=1e-8)


def test_unreachable_tolerance_is_reported():
    with pytest.raises(ToleranceUnreachable):
        lerch.lerch_sderiv_reference(Angle.from_pi(0), 3, 5, 1e-300)


@given(st.sampled_from([0, 1, 2, 3]), st.integers(1, 3), st.sampled_from([20, 50]), st.integers(2, 10))
def test_asymptotic_within_bound(n, a, v, N):
    z = Angle.from_float(2.5)
    b = lerch.lerch_sderiv_asymptotic(z, n, v, a, N)
    r = lerch.lerch_sderiv_reference(z, n, v + a, 1e-12)
    assert abs(b.value - r.value) <= b.bound + r.bound
