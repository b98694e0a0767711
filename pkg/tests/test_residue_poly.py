from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import fp_trial_factor
from ramapprox.errors import DegreeTooLargeOverQ
from ramapprox.residue_poly import (QQ_RESIDUE, FqField, ResPoly, factor, factor_bruteforce, is_irreducible,
                                    p_free_part, separable_degree)


def R(p, ints, f=1):
    return ResPoly.from_ints(FqField(p, f), ints)


def as_int_tuple(poly):
    return tuple(c[0] for c in poly.coeffs)


def prod(field, facs, lc):
    out = ResPoly.const(field, lc)
    for g, k in facs:
        out = out * g ** k
    return out


def test_factor_examples():
    assert [(as_int_tuple(g), k) for g, k in factor(R(2, [1, 0, 1]))] == [((1, 1), 2)]
    f3 = factor(R(3, [1, 0, 1]))
    assert len(f3) == 1 and f3[0][1] == 1 and f3[0][0].degree() == 2
    f4 = factor(R(2, [1, 1, 0, 0, 1]))
    assert len(f4) == 1 and f4[0][0].degree() == 4 and is_irreducible(R(2, [1, 1, 0, 0, 1]))


def test_factor_over_q_capped():
    g = ResPoly(QQ_RESIDUE, [Fraction(c) for c in (1, 0, 0, 0, 0, 1)])
    with pytest.raises(DegreeTooLargeOverQ):
        factor(g)
    h = ResPoly(QQ_RESIDUE, [Fraction(c) for c in (-2, 0, 1)])
    assert len(factor(h)) == 1
    k = ResPoly(QQ_RESIDUE, [Fraction(c) for c in (-4, 0, 1)])
    assert sorted(g.degree() for g, _ in factor(k)) == [1, 1]


@pytest.mark.parametrize("p", [2, 3, 5])
@given(cs=st.lists(st.integers(0, 4), min_size=2, max_size=7))
def test_factor_matches_trial_division(p, cs):
    cs = [c % p for c in cs]
    if not any(cs[1:]):
        return
    while cs[-1] == 0:
        cs.pop()
    g = R(p, cs)
    facs = factor(g)
    got = sorted((as_int_tuple(h), k) for h, k in facs)
    assert got == fp_trial_factor(cs, p)
    assert prod(g.field, facs, g.lc()) == g


def test_factor_over_extension_field_remultiplies():
    F4 = FqField(2, 2)
    a = F4.gen()
    g = ResPoly(F4, [F4.one(), a, F4.zero(), F4.one()]) * ResPoly(F4, [a, F4.one()]) ** 2
    facs = factor(g)
    assert prod(F4, facs, g.lc()) == g
    assert sorted(facs, key=str) == sorted(factor_bruteforce(g), key=str)


def test_separable_degree_examples():
    assert separable_degree(R(2, [1, 0, 1])) == 1
    assert separable_degree(R(2, [1, 1, 1])) == 2
    assert separable_degree(R(2, [0, 0, 1, 0, 1])) == 2


@pytest.mark.parametrize("p", [2, 3])
@given(cs=st.lists(st.integers(0, 2), min_size=2, max_size=4))
def test_separable_degree_of_pth_power(p, cs):
    cs = [c % p for c in cs]
    if not any(cs[1:]):
        return
    while cs[-1] == 0:
        cs.pop()
    g = R(p, cs)
    assert separable_degree(g ** p) == separable_degree(g)
    distinct = sum(h.degree() for h, _ in factor(g))
    assert separable_degree(g) == distinct


def test_separable_degree_char0_squarefree():
    g = ResPoly(QQ_RESIDUE, [Fraction(c) for c in (-2, 0, 1)]) * ResPoly(QQ_RESIDUE, [Fraction(1), Fraction(1)])
    assert separable_degree(g) == 3


def test_p_free_part():
    assert p_free_part(12, 2) == 3
    assert p_free_part(8, 2) == 1
    assert p_free_part(15, 2) == 15
