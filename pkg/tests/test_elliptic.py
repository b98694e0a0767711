import random
from fractions import Fraction

import pytest

from generators import random_curve
from ramapprox.base_field import parse_base
from ramapprox.elliptic import (ADDITIVE, GOOD, MULTIPLICATIVE, Transform, WModel, distinguished_three_torsion,
                                distinguished_two_torsion, invariants, psi3, psi3_reduction_type, reduction_type,
                                roots_reduction, semistable_model)
from ramapprox.errors import (NonIntegralModel, NotPotentialMultiplicative, PatternViolation, ResidueCharThree,
                              SingularModel)
from ramapprox.diskoid import difference_valuations_oracle
from ramapprox.kpoly import KPoly, newton_polygon, parse_poly

Q2, Q3, Q5 = (parse_base(f"qp:{p}") for p in (2, 3, 5))


def test_invariants_examples():
    b2, b4, b6, b8, d, c4, j = invariants(WModel(Q5, 0, 0, 0, 0, 1))
    assert (b2, b4, b6, b8, d, c4) == (0, 0, 4, 0, -432, 0) and j == 0
    W = WModel(Q5, 0, 0, 0, 0, 1)
    assert 1728 * W.disc == W.c4 ** 3 - W.c6 ** 2
    b2, b4, b6, b8, d, _, _ = invariants(WModel(Q5, 0, 0, 1, 0, 0))
    assert (b2, b4, b6, b8, d) == (0, 0, 1, 0, -27)
    with pytest.raises(SingularModel):
        invariants(WModel(Q5))


def test_b_and_c_identities_random():
    rng = random.Random(4)
    for _ in range(60):
        W = WModel(Q3, *(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(5)))
        assert 4 * W.b8 == W.b2 * W.b6 - W.b4 ** 2
        assert 1728 * W.disc == W.c4 ** 3 - W.c6 ** 2


def test_reduction_type_examples():
    assert reduction_type(WModel(Q5, 0, 1, 0, 0, 5)) == MULTIPLICATIVE
    assert reduction_type(WModel(Q5, 0, 0, 0, 0, 5)) == ADDITIVE
    assert reduction_type(WModel(Q5, 0, 0, 0, 1, 0)) == GOOD
    with pytest.raises(NonIntegralModel):
        reduction_type(WModel(Q5, 0, 0, 0, Fraction(1, 5), 1))


def test_roots_reduction_examples():
    assert roots_reduction(0, 1, 5, Q5) == MULTIPLICATIVE
    assert roots_reduction(0, 1, 2, Q5) == GOOD
    assert roots_reduction(0, 5, 10, Q5) == ADDITIVE


def test_psi3_examples():
    assert psi3(WModel(Q5, 0, 0, 0, 0, 1)) == parse_poly("3*z^4+12*z", Q5)
    assert psi3(WModel(Q5, 0, 0, 1, 0, 0)) == parse_poly("3*z^4+3*z", Q5)
    W = WModel(Q5, 1, 2, 3, 4, 5)
    assert psi3(W.transform(Transform(1, 0, 7, 0))) == psi3(W)


def test_psi3_reduction_patterns():
    # reduced psi_3 = 3x(x^3 + 1) over F_5
    assert psi3_reduction_type(WModel(Q5, 0, 0, 0, 0, 1)) == GOOD
    assert psi3_reduction_type(WModel(Q5, 0, 1, 0, 0, 5)) == MULTIPLICATIVE
    assert psi3_reduction_type(WModel(Q5, 0, 0, 0, 0, 5)) == ADDITIVE
    with pytest.raises(ResidueCharThree):
        psi3_reduction_type(WModel(Q3, 0, 0, 0, 1, 1))


def test_psi3_pattern_violation_is_reported():
    # y^2 = x^3 - x over F_5 is good, so a forged psi3 pattern can only come
    # from a bad residue computation; the classifier must refuse 2+2
    import ramapprox.elliptic as ell

    orig = ell.psi3
    try:
        ell.psi3 = lambda W: parse_poly("3*(z-1)^2*(z-2)^2", W.field)
        with pytest.raises(PatternViolation):
            ell.psi3_reduction_type(WModel(Q5, 0, 0, 0, -1, 0))
    finally:
        ell.psi3 = orig


def substitute(g, u, r):
    """u^-8 g(u^2 x + r), expanded term by term."""
    K = g.field
    lin = KPoly(K, [r, u * u])
    out, pw = KPoly(K, []), KPoly(K, [K.one()])
    for c in g.c:
        out = out + pw * c
        pw = pw * lin
    k = u ** -8
    return KPoly(K, [c * k for c in out.c])


@pytest.mark.parametrize("K", [Q2, Q3, Q5], ids=lambda K: K.spec)
def test_psi3_transformation_law(K):
    rng = random.Random(K.spec)
    for _ in range(50):
        W = random_curve(K, rng)
        u, r, s, t = (Fraction(rng.randint(1, 9) * rng.choice((1, -1)), rng.randint(1, 4)),
                      *(Fraction(rng.randint(-20, 20), rng.randint(1, 4)) for _ in range(3)))
        W2 = W.transform(Transform(u, r, s, t))
        lhs = psi3(W2)
        assert lhs == substitute(psi3(W), K.coerce(u), K.coerce(r))
        assert W2.j == W.j


def test_cross_criterion_agreement_p5():
    rng = random.Random(7)
    for _ in range(50):
        al, be, ga = (rng.randint(0, 4) + 5 ** rng.randint(0, 2) * rng.randint(0, 24) for _ in range(3))
        if len({al, be, ga}) < 3:
            continue
        f = parse_poly(f"(z-({al}))*(z-({be}))*(z-({ga}))", Q5)
        W = WModel(Q5, 0, f.coeff(2), 0, f.coeff(1), f.coeff(0))
        t = roots_reduction(al, be, ga, Q5)
        assert reduction_type(W) == t == psi3_reduction_type(W)
    for _ in range(50):
        W = random_curve(Q5, rng)
        assert reduction_type(W) == psi3_reduction_type(W)


def test_distinguished_two_torsion():
    # proxies agree with the exact root to the working precision
    assert Q5.valuation(distinguished_two_torsion(parse_poly("z*(z-1)*(z-5)", Q5), 30) - 1) >= 30
    a = distinguished_two_torsion(parse_poly("z^3-z^2-5", Q5))
    assert Q5.valuation(a - 1) > 0
    with pytest.raises(NotPotentialMultiplicative):
        distinguished_two_torsion(parse_poly("z^3-5", Q5))


def test_distinguished_three_torsion():
    W = WModel(Q3, 1, 0, 0, 0, 81)
    x = distinguished_three_torsion(W)
    others = KPoly(Q3, psi3(W).monic().translate(x).c[1:])
    # distance from x to the rest, read off the Newton polygon
    dist = {s for s in newton_polygon(others).root_valuations()}
    assert len(dist) == 1
    assert min(difference_valuations_oracle(others)) > dist.pop()
    with pytest.raises(NotPotentialMultiplicative):
        distinguished_three_torsion(WModel(Q5, 0, 0, 0, 0, 5))


def test_semistable_pins_p5():
    R = semistable_model(WModel(Q5, 0, 0, 0, 0, 5))
    assert (R.degree, R.f, R.reduction) == (6, 1, GOOD)
    R = semistable_model(WModel(Q5, 0, 1, 0, 0, 5))
    assert (R.degree, R.reduction) == (1, MULTIPLICATIVE)
    R = semistable_model(WModel(Q5, 0, 0, 0, 1, 0))
    assert R.degree == 1 and R.transform.u == 1 and R.model.a == WModel(Q5, 0, 0, 0, 1, 0).a


def test_semistable_singular_input():
    with pytest.raises(SingularModel):
        semistable_model(WModel(Q3, 0, 0, 0, 0, 0))


@pytest.mark.parametrize("spec,allowed", [("qp:3", 12), ("qp:5", 12)])
def test_semistable_random_small_primes(spec, allowed):
    K = parse_base(spec)
    rng = random.Random(spec)
    for _ in range(25):
        W = random_curve(K, rng)
        R = semistable_model(W)
        assert R.f == 1 and allowed % R.degree == 0
        assert R.model.is_integral()
        assert R.model.j == R.L.coerce(W.j)
        if K.valuation(W.j) < 0:
            assert R.degree <= 2 and R.reduction == MULTIPLICATIVE
        else:
            assert R.reduction == GOOD


@pytest.mark.parametrize("spec", ["fpt:2", "fpt:3"])
def test_semistable_function_fields(spec):
    K = parse_base(spec)
    p = K.residue_char
    t = K.t
    for a in ([0, 0, 1, 0, t], [1, 0, 0, 0, t ** 3], [0, t, 0, 1, t ** 2]):
        W = WModel(K, *a)
        if K.is_zero(W.disc):
            continue
        R = semistable_model(W)
        assert R.f == 1 and (24 if p == 2 else 12) % R.degree == 0
        assert R.model.is_integral()
