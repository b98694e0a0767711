from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import sylvester_resultant
from ramapprox.base_field import parse_base
from ramapprox.errors import DivisionByZeroPoly, ParseError
from ramapprox.kpoly import (KPoly, discriminant, from_expansion, newton_polygon, parse_poly,
                             phi_expansion, poly_gcd, resultant)

Q2 = parse_base("qp:2")
F2 = parse_base("fpt:2")


def P(text, K=Q2):
    return parse_poly(text, K)


def polys(K, max_deg=5, monic=False):
    c = st.integers(-20, 20)

    def build(cs, lead):
        if monic:
            cs = cs + [1]
        elif lead:
            cs = cs + [lead]
        return KPoly(K, [K.from_int(x) for x in cs])

    return st.builds(build, st.lists(c, min_size=0, max_size=max_deg),
                     st.integers(-9, 9).filter(bool))


def test_arith_examples():
    f = P("z^2+2")
    assert f * f == P("z^4+4*z^2+4")
    assert P("z^2").translate(Q2.one()) == P("z^2+2*z+1")
    q, r = divmod(P("z^4+20*z^2+292"), f)
    assert q == P("z^2+18") and r == P("256")
    assert q * f + r == P("z^4+20*z^2+292")


def test_scale_and_degree():
    f = P("z^3+z+1")
    assert f.scale(Q2.from_int(2)) == P("8*z^3+2*z+1")
    assert (f * P("z^2+5")).degree() == 5


def test_division_by_zero():
    with pytest.raises(DivisionByZeroPoly):
        divmod(P("z+1"), KPoly(Q2, []))


def test_resultant_examples():
    assert resultant(P("z^2+2"), P("z")) == 2
    g = P("z^3+5*z+7")
    assert resultant(P("z-3"), g) == g(Q2.from_int(3))
    assert resultant(P("z^4+z+1"), P("1")) == 1


def test_resultant_matches_sylvester_on_extension_coefficients():
    from ramapprox.maclane import ExtField

    L = ExtField(P("z^2+2"))
    a = L.gen()
    f = KPoly(L, [a, L.one(), a * a, L.one()])
    g = KPoly(L, [L.one() + a, L.zero(), a])
    assert resultant(f, g) == sylvester_resultant(f, g)


@pytest.mark.parametrize("K", [Q2, parse_base("qp:3"), F2], ids=lambda K: K.spec)
@given(data=st.data())
def test_resultant_equals_sylvester_determinant(K, data):
    f = data.draw(polys(K))
    g = data.draw(polys(K))
    if f.is_zero() or g.is_zero() or (f.degree() < 1 and g.degree() < 1):
        return
    assert resultant(f, g) == sylvester_resultant(f, g)
    sign = -1 if (f.degree() * g.degree()) % 2 else 1
    assert resultant(f, g) == resultant(g, f) * sign


def test_phi_expansion_examples():
    cs = phi_expansion(P("z^4+20*z^2+292"), P("z^2+2"))
    assert cs == [P("256"), P("16"), P("1")]
    phi = P("z^2+2")
    assert phi_expansion(phi, phi) == [P("0"), P("1")]
    assert phi_expansion(P("7"), phi) == [P("7")]


@given(f=polys(Q2, 7), phi=polys(Q2, 3, monic=True))
def test_phi_expansion_round_trip(f, phi):
    if phi.degree() < 1:
        return
    cs = phi_expansion(f, phi)
    assert all(c.degree() < phi.degree() for c in cs)
    assert from_expansion(cs, phi) == f


def test_newton_polygon_examples():
    np1 = newton_polygon(P("z^4+20*z^2+292"))
    assert [(s, n) for s, n in np1.segments] == [(Fraction(-1, 2), 4)]
    np2 = newton_polygon(P("z^4+2*z^3+4*z^2+12*z+12"))
    assert [(s, n) for s, n in np2.segments] == [(Fraction(-1, 2), 4)]
    np3 = newton_polygon(P("z-4"))
    assert np3.slopes() == [-2]
    np4 = newton_polygon(P("z^3+z^2"))
    assert np4.z_multiplicity == 2


@given(f=polys(Q2, 6, monic=True))
def test_newton_polygon_product_of_roots(f):
    if f.degree() < 1 or f.coeff(0) == 0:
        return
    np = newton_polygon(f)
    assert sum(np.root_valuations()) == Q2.valuation(f.coeff(0))
    assert sum(n for _, n in np.segments) == f.degree()
    sl = np.slopes()
    assert sl == sorted(set(sl))


def test_parse_forms():
    assert P("[1, 0, 1]") == P("z^2+1")
    g = parse_poly("z^2 + t*z + 1/(1+t)", F2)
    assert g.coeff(1) == F2.t
    with pytest.raises(ParseError):
        parse_poly("z^^2", Q2)


def test_gcd_and_discriminant():
    f, g = P("(z+1)*(z+3)"), P("(z+1)*(z-5)")
    assert poly_gcd(f, g) == P("z+1")
    assert discriminant(P("z^2+2")) == -8
