import pytest

import oracles as o
from ffmzv.algebra import FieldConfig, GradedNumber, LaurentNumber, Poly, TPoly, TSeries
from ffmzv.carlitz import (
    big_d, carlitz, carlitz_factorial, is_even_weight, little_l, omega_cutoff, omega_series, pi_tilde,
)
from ffmzv.cmpl import little_l_degree


def as_list(f: Poly):
    return [int(f[i]) for i in range(f.degree() + 1)] if not f.is_zero() else []


def test_big_d_examples():
    F2, F3 = FieldConfig.from_q(2), FieldConfig.from_q(3)
    assert big_d(F2, 0) == Poly.one(F2)
    assert big_d(F2, 1) == Poly(F2, [0, 1, 1])
    assert big_d(F3, 2).degree() == 18


def test_little_l_examples():
    F2, F3 = FieldConfig.from_q(2), FieldConfig.from_q(3)
    assert little_l(F2, 0) == Poly.one(F2)
    assert little_l(F2, 1) == Poly(F2, [0, 1, 1])
    assert little_l(F3, 2).degree() == 12


@pytest.mark.parametrize("q", [2, 3, 5])
def test_constants_against_oracle(q):
    F = FieldConfig.from_q(q)
    for i in range(4 if q < 5 else 3):
        assert as_list(big_d(F, i)) == o.big_d(q, i)
        assert as_list(little_l(F, i)) == o.little_l(q, i)
        assert big_d(F, i).degree() == i * q ** i
    for n in range(1, 3 * q + 2):
        assert as_list(carlitz_factorial(F, n)) == o.carlitz_factorial(q, n)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_little_l_power_degree(q):
    F = FieldConfig.from_q(q)
    for i in range(4):
        for n in (1, 2, 3):
            expected = n * q * (q ** i - 1) // (q - 1)
            assert (little_l(F, i) ** n).degree() == expected
            assert n * little_l_degree(q, i) == expected


def test_gamma_examples():
    F3 = FieldConfig.from_q(3)
    assert carlitz_factorial(F3, 1) == Poly.one(F3)
    assert carlitz_factorial(F3, 3) == Poly.one(F3)
    assert carlitz_factorial(F3, 4) == Poly(F3, [0, 2, 0, 1])  # theta^3 - theta
    with pytest.raises(ValueError):
        carlitz_factorial(F3, 0)


@pytest.mark.parametrize("q", [2, 3])
def test_omega_low_coefficients(q):
    F = FieldConfig.from_q(q)
    P, pre = omega_series(F, 4, -60)
    assert P[0] == LaurentNumber.one(F).truncate(-60) or P[0].terms() == [(0, 1)]
    expected = {}
    i = 1
    while -q ** i >= -60:
        expected[-q ** i] = F.neg(1)
        i += 1
    assert dict(P[1].terms()) == expected
    assert pre.grade == (-q) % (q - 1)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_omega_functional_equation_forward(q):
    """theta~^(-q) P = ((t - theta) theta~^(-q) P)^(1), grades included."""
    F = FieldConfig.from_q(q)
    T, err = 8, -80
    P, pre = omega_series(F, T, err)
    lhs = [GradedNumber(c, 0).mul(pre) for c in P.coeffs]
    twisted_pre = pre.frobenius(1)
    assert twisted_pre.grade == GradedNumber.theta_tilde_power(F, -q * q).grade
    assert twisted_pre.unit == GradedNumber.theta_tilde_power(F, -q * q).unit
    Pt = P.twist(1, err)
    lin = TSeries.from_tpoly(TPoly.t_minus(Poly.monomial(F, q)), T)
    rhs_series = lin.mul(Pt, err - q * q)
    for n in range(T):
        r = GradedNumber(rhs_series[n], 0).mul(twisted_pre)
        assert r.grade == lhs[n].grade
        assert r.unit.compare(lhs[n].unit) != "unequal"


@pytest.mark.parametrize("q", [2, 3])
def test_omega_twist_closed_form(q):
    """Omega^(d)(theta) two ways, and against 1/(pi~ L_d) with L_d^-1 = S_d(1) by brute force."""
    F = FieldConfig.from_q(q)
    cc = carlitz(F)
    err = -40
    theta = Poly.theta(F)
    om = cc.omega_at_theta(err - 20)
    for d in range(5):
        # exact division of the product part by prod (t - theta^(q^i)), then t = theta
        den = Poly.one(F)
        for i in range(1, d + 1):
            den = den * (theta - Poly.monomial(F, q ** i))
        lhs = om.mul(GradedNumber(LaurentNumber.from_poly(den).inv(err - 20 - den.degree()), 0))
        # frobenius-twisted evaluation
        P = cc.omega_product(20, err - 20)
        val = P.twist(d, err - 20).evaluate_poly(theta, err - 20)
        rhs = GradedNumber(val, 0).mul(GradedNumber.theta_tilde_power(F, -q ** (d + 1)))
        assert lhs.grade == rhs.grade
        assert lhs.unit.truncate(err).compare(rhs.unit.truncate(err)) != "unequal"
        if d <= (3 if q == 2 else 2):
            S = o.power_sum(q, 1, d, err - 1)
            inv_l = LaurentNumber.from_poly(little_l(F, d)).inv(err - 5)
            assert o.series_equal(o.laurent_to_dict(inv_l.truncate(err)), S, err - 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_pi_times_omega(q):
    F = FieldConfig.from_q(q)
    cc = carlitz(F)
    prod = pi_tilde(F, -60).mul(cc.omega_at_theta(-70))
    assert prod.grade == 0
    assert prod.unit.truncate(-55).compare(LaurentNumber.one(F)) != "unequal"


def test_pi_examples():
    F2 = FieldConfig.from_q(2)
    pi2 = pi_tilde(F2, -40)
    assert pi2.grade == 0 and pi2.unit.degree() == 2
    for q in (3, 4, 5):
        assert pi_tilde(FieldConfig.from_q(q), -20).grade == 1 % (q - 1)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_pi_power_against_oracle(q):
    F = FieldConfig.from_q(q)
    val = pi_tilde(F, -60).pow(q - 1, -50)
    assert val.grade == 0
    ref = o.pi_power_q_minus_1(q, -51)
    assert o.series_equal(o.laurent_to_dict(val.unit.truncate(-50)), ref, -51)


def test_pi_cache_consistency():
    F = FieldConfig.from_q(3)
    cc = carlitz(F)
    a = cc.pi_tilde(-50)
    b = cc.pi_tilde(-100)
    assert a.unit.compare(b.unit.truncate(-50)) != "unequal"
    assert b.unit.err <= -100


def test_even_weight():
    F3, F2 = FieldConfig.from_q(3), FieldConfig.from_q(2)
    assert is_even_weight(F3, 2)
    assert not is_even_weight(F3, 3)
    assert all(is_even_weight(F2, w) for w in range(1, 10))
    for w in range(1, 9):
        g = pi_tilde(F3, -10).pow(w, -10).grade
        assert (g != 0) == (w % 2 == 1)


def test_omega_cutoff():
    # least I with q^(I+1) > -err
    assert omega_cutoff(2, -40) == 5
    assert omega_cutoff(3, -80) == 3
