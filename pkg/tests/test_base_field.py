from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import ord_p_rational
from ramapprox.base_field import INF, fmt_val, parse_base, val
from ramapprox.errors import NegativeValuation, ParseError

QP = [parse_base(f"qp:{p}") for p in (2, 3, 5)]
FPT = [parse_base(f"fpt:{p}") for p in (2, 3)]
QT = parse_base("qt")

nonzero_int = st.integers(-10**6, 10**6).filter(bool)
rationals = st.builds(Fraction, st.integers(-10**6, 10**6), nonzero_int)


def laurent(K):
    coeffs = st.lists(st.integers(-5, 5), min_size=1, max_size=5)
    nonzero = coeffs.filter(lambda d: any(c % K.p for c in d) if K.p else any(d))
    return st.builds(K.element, coeffs, nonzero)


# -- Val ------------------------------------------------------------------

def test_inf_is_maximal_and_absorbing():
    assert INF > Fraction(10**9)
    assert not INF < Fraction(3)
    assert INF + Fraction(2) is INF
    assert fmt_val(INF) == "inf"
    assert val(Fraction(6, 4)) == Fraction(3, 2)


def test_val_fraction_is_reduced():
    v = val(Fraction(4, 6))
    assert (v.numerator, v.denominator) == (2, 3)


# -- valuation examples -----------------------------------------------------

def test_ord2_examples():
    K = parse_base("qp:2")
    assert K.valuation(12) == 2
    assert K.valuation(Fraction(3, 4)) == -2
    assert K.valuation(0) is INF


def test_ord_t_example():
    K = parse_base("fpt:2")
    t = K.t
    assert K.valuation(t ** 2 + t ** 3) == 2


@pytest.mark.parametrize("K", QP, ids=lambda K: K.spec)
@given(x=rationals, y=rationals)
def test_padic_valuation_matches_division_oracle(K, x, y):
    assert K.valuation(x) == ord_p_rational(x, K.p)
    assert K.valuation(x * y) == K.valuation(x) + K.valuation(y)
    if x + y != 0:
        assert K.valuation(x + y) >= min(K.valuation(x), K.valuation(y))


@pytest.mark.parametrize("K", FPT + [QT], ids=lambda K: K.spec)
@given(data=st.data())
def test_laurent_valuation_axioms(K, data):
    x = data.draw(laurent(K))
    y = data.draw(laurent(K))
    vx, vy = K.valuation(x), K.valuation(y)
    assert K.valuation(x * y) == (INF if INF in (vx, vy) else vx + vy)
    s = x + y
    if not K.is_zero(s):
        assert K.valuation(s) >= min(vx, vy)
    if vx is not INF:
        assert vx.denominator == 1


# -- residues ---------------------------------------------------------------

def test_reduce_unit_examples():
    K2 = parse_base("qp:2")
    one = K2.residue_field.one()
    assert K2.reduce_unit(7) == one
    assert K2.reduce_unit(Fraction(3, 5)) == one
    K3 = parse_base("fpt:3")
    t = K3.t
    assert K3.reduce_unit((1 + t) / (1 - t)) == K3.residue_field.one()
    with pytest.raises(NegativeValuation):
        K2.reduce_unit(Fraction(1, 2))


def test_lift_and_uniformizer():
    K2 = parse_base("qp:2")
    assert K2.lift(K2.residue_field.one()) == 1
    assert parse_base("qp:5").uniformizer() == 5
    F = parse_base("fpt:2")
    assert F.uniformizer() == F.t


@pytest.mark.parametrize("K", QP, ids=lambda K: K.spec)
@given(a=rationals, b=rationals)
def test_reduce_unit_multiplicative_padic(K, a, b):
    if K.valuation(a) >= 0 and K.valuation(b) >= 0:
        R = K.residue_field
        assert K.reduce_unit(a * b) == R.mul(K.reduce_unit(a), K.reduce_unit(b))


@pytest.mark.parametrize("K", FPT, ids=lambda K: K.spec)
@given(data=st.data())
def test_reduce_unit_multiplicative_laurent(K, data):
    a, b = data.draw(laurent(K)), data.draw(laurent(K))
    if K.valuation(a) >= 0 and K.valuation(b) >= 0:
        R = K.residue_field
        assert K.reduce_unit(a * b) == R.mul(K.reduce_unit(a), K.reduce_unit(b))


@pytest.mark.parametrize("K", QP + FPT, ids=lambda K: K.spec)
def test_lift_then_reduce_is_identity(K):
    R = K.residue_field
    for r in R.elements():
        assert K.reduce_unit(K.lift(r)) == r


def test_lift_then_reduce_char0():
    for r in (Fraction(0), Fraction(1), Fraction(-3, 7)):
        assert QT.reduce_unit(QT.lift(r)) == r


def test_parse_base_rejects_garbage():
    with pytest.raises(ParseError):
        parse_base("zz:3")
    with pytest.raises(ParseError):
        parse_base("qp:4")


@pytest.mark.parametrize("spec", ["qp:2", "qp:3", "qp:5", "fpt:2", "fpt:3", "qt"])
def test_valuation_axioms_ten_thousand_pairs(spec):
    import random

    K = parse_base(spec)
    rng = random.Random(spec)

    def draw():
        if spec.startswith("qp"):
            return Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 10**4))
        num = [rng.randint(-3, 3) for _ in range(rng.randint(1, 4))]
        den = [0] * rng.randint(0, 2) + [1] + [rng.randint(-3, 3) for _ in range(2)]
        return K.element(num, den)

    for _ in range(10**4):
        x, y = draw(), draw()
        vx, vy = K.valuation(x), K.valuation(y)
        vxy = K.valuation(x * y)
        assert vxy == (INF if INF in (vx, vy) else vx + vy)
        assert K.valuation(x + y) >= min(vx, vy)
