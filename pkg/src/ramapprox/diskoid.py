"""Diskoids D(phi, s) = {b : v(phi(b)) >= s} and the function M_phi.

For a locally irreducible phi with roots a_1..a_n and a fixed root a,
``M_phi(r) = sum_i min(r, v(a - a_i))`` (the i = a term contributing r) is a
strictly increasing piecewise affine bijection; D(phi, M_phi(r)) is the union
of the disks D(a_i, r).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .base_field import INF, fmt_val
from .errors import PurelyInseparableLocal
from .kpoly import KPoly, newton_polygon_points, resultant
from .maclane import ExtField, IndVal, approximants, interpolate, sample_points
from .residue_poly import p_free_part, separable_degree


def root_difference_valuations(phi: KPoly, L: ExtField | None = None) -> list:
    """Sorted values v(a - a_i) over the other roots a_i of phi (INF for
    repeated roots), from the Newton polygon of phi(y + a) over K(a)."""
    n = phi.degree()
    if n <= 1:
        return []
    L = L or ExtField(phi.monic())
    coeffs = []
    for k in range(1, n + 1):
        hk = phi.hasse_derivative(k)
        coeffs.append(L.element(hk) if hk.degree() > 0 else L.coerce(hk.coeff(0)))
    pts = [(k, L.valuation(c)) for k, c in enumerate(coeffs) if c]
    np = newton_polygon_points(pts)
    out = [INF] * np.z_multiplicity + np.root_valuations()
    return sorted(out, key=lambda v: (v is INF, v if v is not INF else 0))


def difference_polynomial(f: KPoly) -> KPoly:
    """D(y) = Res_x(f(x), f(x + y)) / y^n: roots are the ordered differences
    of distinct roots of f.  Computed by interpolation over the base field."""
    F = f.field
    n = f.degree()
    N = n * n
    pts = []
    for a in sample_points(F, N + 2)[1:]:
        pts.append((a, resultant(f, f.translate(a))))
    D = interpolate(F, pts)
    return KPoly(F, D.c[n:], _trusted=True)


def difference_valuations_oracle(f: KPoly) -> list:
    """All n(n-1) ordered root-difference valuations of a separable f."""
    D = difference_polynomial(f)
    np = newton_polygon_points((j, f.field.valuation(c)) for j, c in enumerate(D.c) if c != f.field.zero())
    return sorted(np.root_valuations())


class MPhi:
    """M(r) = r + sum min(r, delta) for a multiset of delta values."""

    def __init__(self, deltas: Sequence):
        self.deltas = sorted(deltas, key=lambda v: (v is INF, v if v is not INF else 0))
        self.n = len(self.deltas) + 1

    def apply(self, r):
        if r is INF:
            return INF
        return r + sum((min(r, d) for d in self.deltas), Fraction(0))

    def invert(self, s):
        if s is INF:
            return INF
        s = Fraction(s)
        acc = Fraction(0)
        count = self.n
        for d in self.deltas:
            if d is INF:
                break
            # on r <= d the function is acc + count * r
            if acc + count * d >= s:
                return (s - acc) / count
            acc += d
            count -= 1
        return (s - acc) / count

    def breakpoints(self) -> list:
        return [(d, self.apply(d)) for d in self.deltas if d is not INF]

    def to_json(self) -> dict:
        return {"breakpoints": [[fmt_val(r), fmt_val(s)] for r, s in self.breakpoints()],
                "degree": self.n}


def m_phi(phi: KPoly, deltas: Sequence | None = None) -> MPhi:
    if deltas is None:
        deltas = root_difference_valuations(phi)
    return MPhi(deltas)


@dataclass
class Diskoid:
    phi: KPoly
    s: object
    r: object
    disks: int

    def to_json(self) -> dict:
        F = self.phi.field
        return {"phi": [F.format(c) for c in self.phi.c], "s": fmt_val(self.s),
                "r": fmt_val(self.r), "disks": self.disks}


def make_diskoid(phi: KPoly, s) -> Diskoid:
    phi = phi.monic()
    deltas = root_difference_valuations(phi)
    M = MPhi(deltas)
    r = M.invert(s)
    within = 1 + sum(1 for d in deltas if d >= r)
    return Diskoid(phi, s, r, phi.degree() // within)


def min_disk_radius(f: KPoly):
    deltas = root_difference_valuations(f.monic())
    if not deltas:
        return INF
    r = deltas[0]
    if r is INF:
        raise PurelyInseparableLocal("all roots coincide over the completion", {"f": str(f)})
    return r


def min_disk_of_roots(f: KPoly) -> Diskoid:
    """The minimal disk containing the roots of f, centred at the
    Ramified Approximation key."""
    from .wtr import ramified_approx

    f = f.monic()
    if f.degree() < 2:
        raise ValueError("min_disk_of_roots needs degree >= 2")
    r = min_disk_radius(f)
    res = ramified_approx(f)
    return res.disk if res.disk.r == r else make_diskoid(res.phi, m_phi(res.phi).apply(r))


def member(D: Diskoid, h: KPoly) -> bool:
    """Do the roots of the locally irreducible h lie in D?"""
    h = h.monic()
    if h.degree() == 1:
        a = -h.coeff(0)
        return h.field.valuation(D.phi(a)) >= D.s
    approximants(h)  # certification: raises unless h is locally irreducible
    return _resultant_value(h, D.phi) >= D.s


def _resultant_value(h: KPoly, g: KPoly):
    r = resultant(h, g)
    if r == h.field.zero():
        return INF
    return h.field.valuation(r) / h.degree()


def in_min_disk(f: KPoly, h: KPoly) -> bool:
    """Do the roots of the locally irreducible h lie in the minimal disk about
    the roots of f?  (v(f(b)) >= deg(f) * r_f, valid for any f.)"""
    r = min_disk_radius(f)
    return _resultant_value(h.monic(), f) >= f.degree() * r


def inductive_representation(D: Diskoid) -> IndVal:
    """An inductive valuation equal to the infimum valuation on D."""
    chain = approximants(D.phi)
    n = chain.n
    s = D.s
    deg = D.phi.degree()
    for k in range(n, 0, -1):
        st = chain.stage(k)
        t = s * st.degree / deg
        prev_val = chain.value(k - 1, st.phi) if k > 1 else None
        if k == 1 or t > prev_val:
            if k < n and t == st.mu:
                V = chain.truncate(k)
            else:
                V = IndVal(chain.base, chain.pairs()[: k - 1] + [(st.phi, t)])
            if V(D.phi) != s:
                raise AssertionError("diskoid representation failed verification")
            return V
    raise AssertionError("unreachable")  # pragma: no cover


def diskoid_valuation(D: Diskoid, g: KPoly):
    if D.s is INF:
        raise ValueError("diskoid_valuation needs finite s")
    return inductive_representation(D)(g)


def branch_multiplicity(V: IndVal, psi) -> int:
    """deg_sep(psi) * deg_sep(eta) * p-free part of tau at the last stage."""
    st = V.last
    p = V.base.residue_char
    phi = st.phi
    deltas = root_difference_valuations(phi) if phi.degree() > 1 else []
    r = MPhi(deltas).invert(st.mu)
    ge = 1 + sum(1 for d in deltas if d >= r)
    gt = 1 + sum(1 for d in deltas if d > r)
    eta = ge // gt
    return separable_degree(psi) * eta * p_free_part(st.tau, p)
