import random
from fractions import Fraction

import pytest

from ramapprox.base_field import parse_base
from ramapprox.diskoid import difference_valuations_oracle, make_diskoid, m_phi, member, min_disk_of_roots
from ramapprox.errors import NotEquispaced, NotIrreducible, ResidueCharZero
from ramapprox.kpoly import KPoly, discriminant, parse_poly
from ramapprox.maclane import ExtField, approximants, ext_valuation, local_branches
from ramapprox.wtr import (_p_part, ax_refinement, char0_center, char0_certificate, displacement_valuations,
                           equispaced_quartic, ramified_approx, separable_perturb, wtr_index)

Q2 = parse_base("qp:2")
F2 = parse_base("fpt:2")
QT = parse_base("qt")
QUARTIC = "z^4+20*z^2+292"
SHIFTED_QUARTIC = "z^4+2*z^3+4*z^2+12*z+12"


def P(text, K=Q2):
    return parse_poly(text, K)


def check_result(res, f):
    p = f.field.residue_char
    assert res.L.f == 1
    e = res.L.e
    while e % p == 0:
        e //= p
    assert e == 1
    assert _p_part(f.degree(), p) % res.phi.degree() == 0
    assert member(min_disk_of_roots(f), res.phi) if f.degree() > 1 else True


def test_shifted_quartic():
    f = P(SHIFTED_QUARTIC)
    res = ramified_approx(f)
    assert (res.e, res.f) == (2, 1) and res.phi.degree() == 2
    check_result(res, f)
    # phi and z^2+2 share the radius-3/2 disk
    for a, b in ((res.phi, P("z^2+2")), (P("z^2+2"), res.phi)):
        D = make_diskoid(a, m_phi(a).apply(Fraction(3, 2)))
        assert member(D, b)


def test_quartic_wtr_index():
    res = ramified_approx(P(QUARTIC))
    assert res.phi == P("z^2+2") and res.j == 2


def test_linear_input_is_trivial():
    res = ramified_approx(P("z-5"))
    assert res.phi == P("z-5") and res.L.degree == 1


def test_residue_char_zero_redirects():
    with pytest.raises(ResidueCharZero):
        ramified_approx(parse_poly("z^2-t", QT))


def test_char0_center_examples():
    f = parse_poly("z^2-t", QT)
    assert char0_center(f) == 0
    cert = char0_certificate(f, char0_center(f))
    assert cert["ok"] and cert["radius"] == "1/2"
    assert char0_center(parse_poly("z-3/5", QT)) == QT.coerce(Fraction(3, 5))
    a = QT.coerce(Fraction(7, 2))
    g = KPoly(QT, [a * a - QT.t, -2 * a, QT.one()])
    assert char0_center(g) == a


def test_char0_center_in_min_disk_random():
    rng = random.Random(50)
    t = QT.t
    done = 0
    while done < 50:
        n = rng.randint(1, 4)
        cs = [QT.from_int(rng.randint(-5, 5)) * t ** rng.randint(0, 3) for _ in range(n)]
        f = KPoly(QT, cs + [QT.from_int(rng.randint(1, 3))])
        if n > 1 and discriminant(f) == QT.zero():
            continue
        assert char0_certificate(f, char0_center(f))["ok"]
        done += 1


def test_ax_refinement_delegates_on_irreducible():
    f = P(SHIFTED_QUARTIC)
    D = min_disk_of_roots(f)
    res = ax_refinement(f, D)
    assert res.phi == ramified_approx(f).phi
    assert res.phi.degree() <= 4


def test_ax_refinement_reducible_unit_disk():
    f = P("(z^2+2)*(z^2+z+1)")
    D = make_diskoid(P("z"), Fraction(0))
    res = ax_refinement(f, D)
    assert res.phi.degree() <= 4 and member(D, res.phi)
    assert res.L.f == 1


def test_ax_refinement_cubic_gives_base_point():
    f = P("(z-1)*(z^2+2)")
    D = make_diskoid(P("z"), Fraction(0))
    res = ax_refinement(f, D)
    assert res.phi.degree() == 1 and member(D, res.phi)


def test_wtr_invariants_random():
    rng = random.Random(11)
    for spec in ("qp:2", "qp:3", "fpt:2"):
        K = parse_base(spec)
        count = 0
        while count < 15:
            n = rng.randint(2, 6)
            cs = [K.from_int(rng.randint(-9, 9)) * (K.t ** rng.randint(0, 2) if K.char else 1)
                  for _ in range(n)]
            f = KPoly(K, cs + [K.one()])
            try:
                V = approximants(f)
            except NotIrreducible:
                continue
            if V.last.phi != f or (K.char and not f.derivative()):
                continue
            res = ramified_approx(f)
            assert res.certificate.get("member", True)
            check_result(res, f)
            assert res.j == wtr_index(V, K.residue_char) or res.perturbed or res.j <= V.n
            count += 1


@pytest.mark.parametrize("q,vc", [(2, 2), (2, 4), (2, 8), (4, 2), (4, 4), (4, 8)])
def test_separable_perturb_displacement(q, vc):
    f = parse_poly(f"z^{q}-t", F2)
    g, c = separable_perturb(f, vc)
    assert F2.valuation(c) == vc and discriminant(g) != F2.zero()
    disp = max(displacement_valuations(f, g))
    v_alpha = Fraction(1, q)
    assert disp == (vc + v_alpha - 0) / q


def test_separable_perturb_leaves_separable_alone():
    f = P("z^2+2")
    assert separable_perturb(f, 3) == (f, Q2.zero())


def test_equispaced_wtr_root():
    f = P("z^4-8*z^3-56*z^2+56*z+4")
    phi, r, case = equispaced_quartic(f)
    assert case == "wtr-root" and phi == f
    L = ExtField(phi)
    assert L.f == 1 and (r * L.e).denominator == 1


def test_equispaced_split_case():
    f = P("z^4-64*z^3+32*z^2+7*z-2")
    phi, r, case = equispaced_quartic(f)
    assert case == "split" and phi.degree() == 1 and r.denominator == 1
    assert sum(b.degree for b in local_branches(f)) == 4
    assert set(difference_valuations_oracle(f)) == {r}
    assert Q2.valuation(f(-phi.coeff(0))) >= 4 * r


def test_equispaced_unramified_case():
    f = P("z^4-8*z^3-28*z^2+5*z+7")
    phi, r, case = equispaced_quartic(f)
    assert case == "unramified" and phi.degree() == 1 and r == 0
    assert set(difference_valuations_oracle(f)) == {r}


def test_equispaced_quadratic_key():
    f = P("z^4-8*z^3+4*z^2-24*z-4")
    phi, r, case = equispaced_quartic(f)
    assert case == "quadratic-key" and phi.degree() == 2
    L = ExtField(phi)
    assert L.f == 1 and (r * L.e).denominator == 1
    b = phi.coeff(1)
    assert ext_valuation(L, KPoly(Q2, [b, Q2.from_int(2)])) == r
    assert member(min_disk_of_roots(f), phi)


def test_z4_minus_2_is_not_equispaced():
    f = P("z^4-2")
    assert sorted(set(difference_valuations_oracle(f))) == [Fraction(3, 4), Fraction(5, 4)]
    with pytest.raises(NotEquispaced):
        equispaced_quartic(f)
