import random

import pytest

import oracles as o
from ffmzv.algebra import FieldConfig, GradedNumber, LaurentNumber, Poly, RationalFunction
from ffmzv.carlitz import big_d, pi_tilde
from ffmzv.relations import (
    InsufficientPrecision, find_relations, nullspace_fq, product_relation_search, rational_reconstruct,
    relation_margin,
)
from ffmzv.zeta import multizeta


def poly_list(f):
    return [int(f[i]) for i in range(f.degree() + 1)] if not f.is_zero() else []


def test_nullspace_small():
    F = FieldConfig.from_q(3)
    basis = nullspace_fq(F, [[1, 1, 0], [0, 1, 1]], 3)
    assert len(basis) == 1
    v = [int(c) for c in basis[0]]
    assert (v[0] + v[1]) % 3 == 0 and (v[1] + v[2]) % 3 == 0 and any(v)


@pytest.mark.parametrize("q", [2, 3])
def test_rational_reconstruction(q):
    F = FieldConfig.from_q(q)
    x = Poly.theta(F)
    for r in [RationalFunction(x + 1, x ** 2), RationalFunction(x ** 2 + 1, x ** 3 + x)]:
        Z = LaurentNumber.from_rational(r, -60)
        assert rational_reconstruct(Z, 3) == r


def test_zeta_one_is_not_rational():
    F = FieldConfig.from_q(3)
    assert rational_reconstruct(multizeta(F, (1,), -80), 5) is None


@pytest.mark.parametrize("q", [2, 3])
def test_planted_pi_power(q):
    F = FieldConfig.from_q(q)
    x = Poly.theta(F)
    r = RationalFunction(x ** 2 + 1, x + 1)
    pw = pi_tilde(F, -130).pow(q - 1, -120)
    assert pw.grade == 0
    planted = pw.unit.mul(LaurentNumber.from_rational(r, -140), -120)
    certs = find_relations([planted, pw.unit], ("A", 3), -120)
    # A-multiples of the minimal relation also fit the degree bound; all give r
    assert certs
    for cert in certs:
        a, b = cert.coefficients
        assert RationalFunction(-b, a) == r


def test_euler_carlitz_q3():
    """D_1 zeta(2) + pi~^2 = 0 for q = 3, found over A_{<=3} and re-verified deeper."""
    F = FieldConfig.from_q(3)

    def values(e):
        return [multizeta(F, (2,), e), pi_tilde(F, e - 10).pow(2, e).unit]

    certs = find_relations(values(-120), ("A", 3), -120, recompute=values)
    assert len(certs) == 1 and certs[0].reverified_at == -240
    a, b = certs[0].coefficients
    r = RationalFunction(-b, a)
    assert r == RationalFunction(-Poly.one(F), big_d(F, 1))
    # the same relation on independently summed series
    z = o.multizeta(3, (2,), -61)
    pi2 = o.pi_power_q_minus_1(3, -61)
    lhs = o.sadd(o.smul(o.sfrom_poly(poly_list(a)), z, -58, 3),
                 o.smul(o.sfrom_poly(poly_list(b)), pi2, -58, 3), 3)
    assert lhs == {}


def test_frobenius_relation_over_fp():
    F = FieldConfig.from_q(2)
    z1 = multizeta(F, (1,), -80)
    sq = z1.mul(z1, -80).truncate(-80)
    certs = find_relations([sq, multizeta(F, (2,), -80)], "Fp", -80)
    assert len(certs) == 1
    assert [c for c in certs[0].coefficients] == [Poly.one(F), Poly.one(F)]
    assert certs[0].reverified_at is None


def test_product_relation_q3():
    F = FieldConfig.from_q(3)
    cert, cands = product_relation_search(F, (1,), (1,), -80)
    assert cands == [(2,), (1, 1)]
    assert cert is not None
    coeffs = [int(c[0]) if not c.is_zero() else 0 for c in cert.coefficients]
    # zeta(1)^2 = zeta(2) + 2 zeta(1,1)
    assert coeffs == [1, 2, 1]
    assert cert.reverified_at == -160


def test_product_relation_q2():
    F = FieldConfig.from_q(2)
    cert, cands = product_relation_search(F, (1,), (2,), -80)
    assert cert is not None and not cert.coefficients[0].is_zero()
    assert product_relation_search(F, (1,), (2,), -80, corrupt=True)[0] is None


def test_planted_random_relations():
    rng = random.Random(17)
    found = 0
    for trial in range(50):
        q = rng.choice([2, 3])
        F = FieldConfig.from_q(q)
        n = rng.randint(2, 3)
        base = []
        for _ in range(n):
            terms = {e: rng.randrange(q) for e in range(-1, -61, -1)}
            base.append(LaurentNumber.from_terms(F, terms).truncate(-60) + LaurentNumber.monomial(F, 0))
        coeffs = [rng.randrange(1, q) for _ in range(n)]
        combo = LaurentNumber.zero(F)
        for c, v in zip(coeffs, base):
            combo = combo + v.mul(LaurentNumber.from_poly(Poly.constant(F, c)), -60)
        vals = base + [combo.truncate(-60)]
        certs = find_relations(vals, "Fq", -60)
        assert certs, trial
        ok = False
        for cert in certs:
            assert relation_margin(vals, cert.coefficients)[0]
            lam = cert.coefficients[-1]
            if not lam.is_zero():
                inv = F.inv(int(lam[0]))
                got = [F.neg(F.mul(int(a[0]) if not a.is_zero() else 0, inv)) for a in cert.coefficients[:-1]]
                ok = ok or got == coeffs
        found += ok
    assert found == 50


def test_mixed_grades_rejected():
    F = FieldConfig.from_q(3)
    pi = pi_tilde(F, -40)
    assert pi.grade == 1
    with pytest.raises(ValueError):
        find_relations([pi, GradedNumber(multizeta(F, (1,), -40), 0)], "Fq", -40)


def test_insufficient_precision():
    F = FieldConfig.from_q(3)
    with pytest.raises(InsufficientPrecision):
        find_relations([multizeta(F, (1,), -10), multizeta(F, (2,), -10)], ("A", 6), -10)
    with pytest.raises(InsufficientPrecision):
        find_relations([LaurentNumber.one(F), LaurentNumber.one(F)], "Fq")


def test_no_false_relation():
    """Independent random values carry no F_q relation once enough rows exist."""
    rng = random.Random(2)
    F = FieldConfig.from_q(3)
    vals = [LaurentNumber.from_terms(F, {e: rng.randrange(3) for e in range(0, -80, -1)}).truncate(-80)
            for _ in range(3)]
    assert find_relations(vals, "Fq", -80) == []
