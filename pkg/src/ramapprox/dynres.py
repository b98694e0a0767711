"""Resultants of rational maps, conjugation, and the minimal-resultant search.

A map of degree d is a pair of binary forms (F0, F1), stored dehomogenized as
polynomials f_i(z) = F_i(z, 1) of formal degree d.  For a centre alpha and a
rational t, ``ordres_at(f, alpha, t)`` is ordres of the conjugate by
z -> u z + alpha with v(u) = t.  Since Res(F o M) = det(M)^(d^2 + d) Res(F),
that quantity also equals

    ordres(f) + (d^2 + d) t - 2 d min_k(v(G0_k(t)), v(G1_k(t)))

where the G-coefficient valuations are affine in t and read off from Hasse
derivatives at alpha.  The explicit conjugation is the certified route; the
closed form drives the search.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import ceil, floor
from typing import Any

from .base_field import INF, fmt_val
from .errors import DegreeMismatch, NotCoprime, SearchBudgetExceeded
from .kpoly import KPoly, discriminant, newton_polygon_points, poly_gcd, resultant
from .maclane import ExtField, local_branches, refine_branch
from .wtr import separable_perturb, wtr_index

log = logging.getLogger("ramapprox.dynres")


# ----------------------------------------------------------------------------
# degree bounds
# ----------------------------------------------------------------------------

def q_of(p: int, d: int) -> int:
    if p == 0:
        return 1
    q = 1
    while d % p == 0:
        d //= p
        q *= p
    return q


@dataclass(frozen=True)
class DegreeBounds:
    p: int
    d: int
    q_d_plus_1: int
    q_d_minus_1: int
    q_d: int
    A: int
    B: int

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d, "q(d+1)": self.q_d_plus_1, "q(d-1)": self.q_d_minus_1,
                "q(d)": self.q_d, "A": self.A, "B": self.B}


def degree_bounds(p: int, d: int) -> DegreeBounds:
    if d < 2:
        raise ValueError("d must be at least 2")
    qp1, qm1, q0 = q_of(p, d + 1), q_of(p, d - 1), q_of(p, d)
    A = (d + 1) * max(qp1, qm1)
    if p > 0 and d % p == 0:
        B = (d - 1) * q0
    elif p > 0 and d % p == 1:
        B = d * qm1
    else:
        B = d + 1
    return DegreeBounds(p, d, qp1, qm1, q0, A, B)


# ----------------------------------------------------------------------------
# maps and Moebius transformations
# ----------------------------------------------------------------------------

def form_resultant(f0: KPoly, f1: KPoly, d: int):
    """Res(F0, F1) for the degree-d forms with F_i(z, 1) = f_i."""
    F = f0.field
    d0, d1 = f0.degree(), f1.degree()
    if d0 < 0 or d1 < 0 or (d0 < d and d1 < d):
        return F.zero()
    if d0 == d:
        return resultant(f0, f1) * f0.lc() ** (d - d1)
    sign = -1 if (d * d) % 2 else 1
    return resultant(f1, f0) * f1.lc() ** (d - d0) * sign


@dataclass
class RatMap:
    f0: KPoly
    f1: KPoly
    d: int
    scale: Any = None

    @property
    def field(self):
        return self.f0.field

    def over(self, L) -> "RatMap":
        if L is self.field:
            return self
        co = lambda g: KPoly(L, [L.coerce(c) for c in g.c])  # noqa: E731
        return RatMap(co(self.f0), co(self.f1), self.d, self.scale)

    def min_valuation(self):
        F = self.field
        vals = [F.valuation(c) for g in (self.f0, self.f1) for c in g.c if not F.is_zero(c)]
        return min(vals)

    def __call__(self, z):
        return self.f0(z) / self.f1(z)

    def same_as(self, other: "RatMap") -> bool:
        """Equal as points of projective space (forms up to a common scalar)."""
        return self.d == other.d and self.f0 * other.f1 == self.f1 * other.f0 and \
            self.f0.degree() == other.f0.degree() and self.f1.degree() == other.f1.degree()

    def to_json(self) -> dict:
        F = self.field
        pad = lambda g: [F.format(g.coeff(i)) for i in range(self.d, -1, -1)]  # noqa: E731
        return {"d": self.d, "F0": pad(self.f0), "F1": pad(self.f1)}


def normalize(f0: KPoly, f1: KPoly, d: int | None = None) -> RatMap:
    """Scale (f0, f1) so the minimal coefficient valuation is 0."""
    F = f0.field
    if d is None:
        d = max(f0.degree(), f1.degree())
    if d < 2 or f0.degree() > d or f1.degree() > d:
        raise DegreeMismatch("forms must have degree d >= 2",
                             {"d": d, "deg_f0": f0.degree(), "deg_f1": f1.degree()})
    if F.is_zero(form_resultant(f0, f1, d)):
        raise NotCoprime("forms share a root", {"f0": str(f0), "f1": str(f1)})
    g = RatMap(f0, f1, d)
    k = g.min_valuation() * F.E
    c = F.pow_uniformizer(int(k))
    ci = F.one() / c
    return RatMap(f0 * ci, f1 * ci, d, c)


def ordres(f: RatMap):
    F = f.field
    R = form_resultant(f.f0, f.f1, f.d)
    v = F.valuation(R)
    if f.scale is None:
        v -= 2 * f.d * f.min_valuation()
    return v


@dataclass(frozen=True)
class Mobius:
    """z -> (a z + b) / (c z + e)."""

    a: Any
    b: Any
    c: Any
    e: Any

    def det(self):
        return self.a * self.e - self.b * self.c

    def compose(self, other: "Mobius") -> "Mobius":
        """Matrix product self * other (apply other first)."""
        a, b, c, e = self.a, self.b, self.c, self.e
        A, B, C, E = other.a, other.b, other.c, other.e
        return Mobius(a * A + b * C, a * B + b * E, c * A + e * C, c * B + e * E)

    def over(self, L) -> "Mobius":
        return Mobius(*(L.coerce(x) for x in (self.a, self.b, self.c, self.e)))


def _compose_form(g: KPoly, d: int, s: Mobius) -> KPoly:
    """G(z, 1) for G(X, Y) = F(aX + bY, cX + eY), F of formal degree d."""
    F = g.field
    num = KPoly(F, [s.b, s.a])
    den = KPoly(F, [s.e, s.c])
    out = KPoly(F, [])
    pn = KPoly(F, [F.one()])
    dens = [KPoly(F, [F.one()])]
    for _ in range(d):
        dens.append(dens[-1] * den)
    for i in range(d + 1):
        ci = g.coeff(i)
        if not F.is_zero(ci):
            out = out + pn * dens[d - i] * ci
        pn = pn * num
    return out


def conjugate(f: RatMap, s: Mobius) -> RatMap:
    """f^s = s^-1 o f o s, renormalized."""
    L = _field_of(s.a, f.field)
    f = f.over(L)
    s = s.over(L)
    g0 = _compose_form(f.f0, f.d, s)
    g1 = _compose_form(f.f1, f.d, s)
    # adjugate (e, -b; -c, a) applied to (G0, G1)
    h0 = g0 * s.e - g1 * s.b
    h1 = g1 * s.a - g0 * s.c
    return normalize(h0, h1, f.d)


# ----------------------------------------------------------------------------
# ordres along rays z -> u z + alpha
# ----------------------------------------------------------------------------

_EXT_CACHE: dict = {}


def _field_of(x, default):
    F = getattr(x, "field", None)
    return F if isinstance(F, ExtField) else default


def scale_element(F, t) -> tuple:
    """(L, u) with v(u) = t; L = F or F[z]/(z^n - pi_F^m), separably
    perturbed when n is divisible by the characteristic."""
    k = Fraction(t) * F.E
    if k.denominator == 1:
        return F, F.pow_uniformizer(int(k))
    n, m = k.denominator, k.numerator
    key = (id(F), n, m)
    hit = _EXT_CACHE.get(key)
    if hit is not None and hit[0] is F:
        return hit[1], hit[2]
    z = KPoly.z(F)
    mm = m % n
    h = z ** n - F.pow_uniformizer(mm)
    if F.char and n % F.char == 0:
        h, _ = separable_perturb(h, Fraction(mm, n) * 4 + 4)
    L = ExtField(h, name=f"u{getattr(F, 'depth', 0) + 1}")
    u = L.gen() * L.coerce(F.pow_uniformizer((m - mm) // n))
    _EXT_CACHE[key] = (F, L, u)
    return L, u


def ordres_at(f: RatMap, alpha, t):
    """ordres of f conjugated by z -> u z + alpha, v(u) = t (explicit route)."""
    F = _field_of(alpha, f.field)
    alpha = F.coerce(alpha)
    L, u = scale_element(F, t)
    s = Mobius(L.coerce(u), L.coerce(alpha), L.zero(), L.one())
    return ordres(conjugate(f.over(L), s))


@dataclass
class Profile:
    """Closed form of t -> ordres_at(f, alpha, t) for one centre alpha."""

    base: Any
    d: int
    lines: list  # (slope, intercept) of the coefficient valuations
    E: int = 1

    def mu(self, t):
        return min(a * t + b for a, b in self.lines)

    def __call__(self, t):
        t = Fraction(t)
        return self.base + (self.d * self.d + self.d) * t - 2 * self.d * self.mu(t)

    def breakpoints(self) -> list:
        pts = set()
        L = self.lines
        for i in range(len(L)):
            for j in range(i + 1, len(L)):
                (a1, b1), (a2, b2) = L[i], L[j]
                if a1 != a2:
                    pts.add(Fraction(b2 - b1) / (a1 - a2))
        return sorted(pts)

    def exact_minimum(self) -> tuple:
        """(value, lo, hi): least value over all rationals, attained on [lo, hi]."""
        bps = self.breakpoints()
        if not bps:
            return self(0), Fraction(0), Fraction(0)
        vals = [(self(t), t) for t in bps]
        best = min(v for v, _ in vals)
        mins = [t for v, t in vals if v == best]
        return best, min(mins), max(mins)

    def grid_minimum(self, dmax: int) -> tuple:
        """(value, t) over t with denominator <= dmax, bracketed by the exact
        minimizer.  Ties go to the least ramification over K(alpha), then the
        least denominator, then the largest t."""
        _, lo, hi = self.exact_minimum()
        a, b = floor(lo) - 1, ceil(hi) + 1
        grid = {Fraction(k, n) for n in range(1, dmax + 1) for k in range(a * n, b * n + 1)}
        key = lambda t: (self(t), (t * self.E).denominator, t.denominator, -t)  # noqa: E731
        t = min(grid, key=key)
        return self(t), t


def profile(f: RatMap, alpha) -> Profile:
    """Closed-form profile at the centre alpha (exact valuations in K(alpha))."""
    F = _field_of(alpha, f.field)
    g = f.over(F)
    alpha = F.coerce(alpha)
    lines = []
    for k in range(g.d + 1):
        h0 = g.f0.hasse_derivative(k)(alpha) if k <= g.f0.degree() else F.zero()
        h1 = g.f1.hasse_derivative(k)(alpha) if k <= g.f1.degree() else F.zero()
        c0 = h0 - alpha * h1
        if not F.is_zero(c0):
            lines.append((k, F.valuation(c0)))
        if not F.is_zero(h1):
            lines.append((k + 1, F.valuation(h1)))
    R = F.valuation(form_resultant(g.f0, g.f1, g.d))
    return Profile(R, g.d, lines, F.E)


# ----------------------------------------------------------------------------
# candidate centres
# ----------------------------------------------------------------------------

def center_polynomials(f: RatMap) -> list[KPoly]:
    """F0(z,1) - z F1(z,1) and F0(z,1) - a F1(z,1), a = f(infinity)."""
    F = f.field
    z = KPoly.z(F)
    out = []
    fix = f.f0 - z * f.f1
    if fix.degree() > 0:
        out.append(fix)
    lc1 = f.f1.coeff(f.d)
    if F.is_zero(lc1):
        pre = f.f1
    else:
        a = f.f0.coeff(f.d) / lc1
        pre = f.f0 - f.f1 * a
    if pre.degree() > 0:
        out.append(pre)
    return out


@dataclass
class Center:
    alpha: Any
    field: Any
    degree: int
    source: str


def _separable_model(P: KPoly, k: int) -> KPoly:
    """P itself when separable, else its squarefree part, else P + pi^k z."""
    F = P.field
    if not F.is_zero(discriminant(P)):
        return P
    if P.derivative():
        Q = P // poly_gcd(P, P.derivative())
        if Q.degree() < 1 or not F.is_zero(discriminant(Q)) or Q.degree() == 1:
            return Q
    z = KPoly.z(F)
    for _ in range(16):
        Q = P + z * F.pow_uniformizer(k * F.E)
        if not F.is_zero(discriminant(Q)):
            return Q
        k *= 2
    raise SearchBudgetExceeded("no separable model of a centre polynomial", {"P": str(P)})


def center_points(f: RatMap, target) -> list[tuple]:
    """(P, Q, branch, L, beta) for every root of every centre polynomial P,
    beta within ``target`` of it; Q is the separable model carrying the
    branches."""
    out = []
    for P in center_polynomials(f):
        k = P.degree() * (ceil(target) + 2)
        for _ in range(6):
            Q = _separable_model(P, k)
            if Q.degree() < 1:
                break
            try:
                pts = [(P, Q, br) + _close_root(P, Q, br, target) for br in local_branches(Q)]
            except SearchBudgetExceeded:
                k *= 2
                continue
            out.extend(pts)
            break
        else:
            raise SearchBudgetExceeded("centre not isolated", {"P": str(P)})
    return out


def _close_root(P: KPoly, Q: KPoly, br, target, budget: int = 40):
    """An element beta of K(beta) with v(beta - root) >= target for a root of
    P near the branch of Q; closeness measured exactly on the Newton polygon
    of P(z + beta)."""
    F = P.field
    cur = br
    for _ in range(budget):
        key = cur.key
        if key.degree() == 1:
            L, beta = F, -key.coeff(0) / key.lc()
        elif key.derivative():
            L = ExtField(key.monic(), name="c")
            beta = L.gen()
        else:
            cur = refine_branch(Q, cur)
            continue
        PL = P if L is F else KPoly(L, [L.coerce(c) for c in P.c])
        if _max_root_val(PL.translate(beta)) >= target:
            return L, beta
        if cur.exact:
            break
        cur = refine_branch(Q, cur)
    raise SearchBudgetExceeded("could not isolate a centre", {"P": str(P)})


def _max_root_val(h: KPoly):
    F = h.field
    if F.is_zero(h.coeff(0)):
        return INF
    pts = [(k, F.valuation(c)) for k, c in enumerate(h.c) if not F.is_zero(c)]
    return max(newton_polygon_points(pts).root_valuations())


def candidate_centers(f: RatMap) -> list[Center]:
    """Weakly totally ramified keys along each centre branch, plus a close
    approximation of the centre itself."""
    F = f.field
    p = F.residue_char
    out: list[Center] = [Center(F.zero(), F, 1, "origin")]
    seen = {("origin",)}
    for P, Q, br, L, beta in center_points(f, Fraction(2 * f.d + 2)):
        chain = br.chain_for_factor()
        j = wtr_index(chain, p) if p else chain.n
        for i in range(1, j + 1):
            phi = chain.stage(i).phi
            tag = ("k", str(phi))
            if tag in seen or (phi.degree() > 1 and not phi.derivative()):
                continue
            seen.add(tag)
            if phi.degree() == 1:
                out.append(Center(-phi.coeff(0) / phi.lc(), F, 1, "key"))
            else:
                Lk = ExtField(phi.monic(), name="c")
                out.append(Center(Lk.gen(), Lk, phi.degree(), "key"))
        deg = L.degree if isinstance(L, ExtField) else 1
        out.append(Center(beta, L, deg, "root"))
    return out


# ----------------------------------------------------------------------------
# search and semistability
# ----------------------------------------------------------------------------

@dataclass
class MrlResult:
    alpha: Any
    t: Fraction
    L: Any
    u: Any
    ordres_before: Any
    ordres_min: Any
    conjugated: RatMap
    bounds: DegreeBounds
    center: Center
    certificate: dict = dc_field(default_factory=dict)

    @property
    def e(self) -> int:
        return self.L.local_e() if isinstance(self.L, ExtField) else 1

    @property
    def f(self) -> int:
        return self.L.local_f() if isinstance(self.L, ExtField) else 1

    @property
    def degree(self) -> int:
        return self.e * self.f

    def to_json(self) -> dict:
        F = self.center.field
        return {"center": F.format(self.alpha), "center_degree": self.center.degree,
                "t": str(self.t),
                "L": {"e": self.e, "f": self.f, "degree": self.degree},
                "ordres_before": fmt_val(self.ordres_before), "ordres_after": fmt_val(self.ordres_min),
                "bounds": {"A": self.bounds.A, "B": self.bounds.B},
                "certificate": self.certificate}


def _ext_degree(F, t) -> int:
    k = Fraction(t) * F.E
    return k.denominator


def mrl_search(f: RatMap) -> MrlResult:
    K = f.field
    p = K.residue_char
    bounds = degree_bounds(p, f.d)
    cap = max(bounds.q_d_plus_1, bounds.q_d_minus_1)
    before = ordres(f)
    best = None
    for c in candidate_centers(f):
        if c.degree > cap and c.source != "root":
            continue
        prof = profile(f, c.alpha)
        val, t = prof.grid_minimum(f.d + 1)
        deg = (c.field.local_e() * c.field.local_f() if isinstance(c.field, ExtField) else 1)
        deg *= _ext_degree(c.field, t)
        score = (val, deg > bounds.A, deg, t.denominator)
        if best is None or score < best[0]:
            best = (score, c, t, val)
    if best is None:
        raise SearchBudgetExceeded("no candidate centres", {})
    _, c, t, val = best
    L, u = scale_element(c.field, t)
    s = Mobius(L.coerce(u), L.coerce(c.alpha), L.zero(), L.one())
    g = conjugate(f.over(L), s)
    got = ordres(g)
    if got != val:
        raise AssertionError(f"closed form {val} disagrees with conjugation {got}")  # pragma: no cover
    cert = {"closed_form": fmt_val(val), "explicit": fmt_val(got), "source": c.source,
            "within_A": (L.local_e() * L.local_f() if isinstance(L, ExtField) else 1) <= bounds.A}
    res = MrlResult(c.alpha, t, L, u, before, got, g, bounds, c, cert)
    if got == 0:
        cert["within_B"] = res.degree <= bounds.B
    log.info("minimal resultant %s at centre %s (%s), t=%s", fmt_val(got), c.field.format(c.alpha),
             c.source, t)
    return res


def semistable_check(f: RatMap) -> tuple[bool, dict]:
    """Slopes of ordres at the Gauss point toward infinity and toward every
    centre of non-negative valuation; semistable iff none is negative."""
    F = f.field
    eps = Fraction(1, f.d + 1)
    base = ordres(f)
    slopes = {}
    up = (ordres_at(f, F.zero(), -eps) - base) / eps
    slopes["inf"] = up
    for P, _Q, br, L, beta in center_points(f, Fraction(1)):
        if L.valuation(beta) < 0:
            continue
        sl = (ordres_at(f.over(L), beta, eps) - base) / eps
        slopes[f"{P}|{br.degree}|{L.format(beta)}"] = sl
    ok = all(s >= 0 for s in slopes.values())
    return ok, {"ordres": fmt_val(base), "slopes": {k: fmt_val(v) for k, v in slopes.items()}}
