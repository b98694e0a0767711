"""Weierstrass models, reduction types and semistable models.

All coordinate changes are the standard ``(x, y) = (u^2 x' + r, u^3 y' + s u^2 x' + t)``.
Models live over a base field or a tower of ExtFields; the field grows as the
algorithms adjoin roots.  Roots that are rational over the completion but not
over the dense subfield are represented by Newton-refined proxies; every
result is re-verified by an independent reduction criterion, and a failed
verification retries with doubled proxy precision.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Any

from .base_field import INF, fmt_val
from .diskoid import difference_valuations_oracle
from .errors import (
    DomainError,
    NonIntegralModel,
    NotPotentialMultiplicative,
    PatternViolation,
    ResidueCharThree,
    SingularModel,
    Uncertified,
)
from .kpoly import KPoly, newton_polygon_points
from .maclane import ExtField, certified_factor, local_branches
from .residue_poly import ResPoly, factor, separable_degree
from .wtr import equispaced_quartic, ramified_approx, rational_roots

log = logging.getLogger("ramapprox.elliptic")

GOOD = "Good"
MULTIPLICATIVE = "Multiplicative"
ADDITIVE = "Additive"


# ----------------------------------------------------------------------------
# models and coordinate changes
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Transform:
    u: Any
    r: Any
    s: Any
    t: Any
    uinv: Any = None

    @classmethod
    def identity(cls, F) -> "Transform":
        return cls(F.one(), F.zero(), F.zero(), F.zero(), F.one())

    def inverse_scale(self):
        if self.uinv is not None:
            return self.uinv
        return 1 / (Fraction(self.u) if isinstance(self.u, int) else self.u)

    def over(self, F) -> "Transform":
        ui = F.coerce(self.uinv) if self.uinv is not None else None
        return Transform(F.coerce(self.u), F.coerce(self.r), F.coerce(self.s), F.coerce(self.t), ui)

    def then(self, other: "Transform") -> "Transform":
        """Apply self, then other (other's coordinates are the newer ones)."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        ui = self.uinv * other.uinv if self.uinv is not None and other.uinv is not None else None
        return Transform(u1 * u2, r1 + u1 * u1 * r2, s1 + u1 * s2,
                         t1 + u1 ** 3 * t2 + s1 * u1 * u1 * r2, ui)

    def to_json(self, F) -> dict:
        return {k: F.format(getattr(self, k)) for k in ("u", "r", "s", "t")}


class WModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a field F."""

    def __init__(self, field, a1=0, a2=0, a3=0, a4=0, a6=0):
        self.field = field
        self.a1, self.a2, self.a3, self.a4, self.a6 = (field.coerce(a) for a in (a1, a2, a3, a4, a6))

    @property
    def a(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def b2(self):
        return self.a1 * self.a1 + 4 * self.a2

    @cached_property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @cached_property
    def b6(self):
        return self.a3 * self.a3 + 4 * self.a6

    @cached_property
    def b8(self):
        a1, a2, a3, a4, a6 = self.a
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @cached_property
    def disc(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @cached_property
    def c4(self):
        return self.b2 * self.b2 - 24 * self.b4

    @cached_property
    def c6(self):
        b2 = self.b2
        return -b2 ** 3 + 36 * b2 * self.b4 - 216 * self.b6

    @property
    def j(self):
        d = self.disc
        if self.field.is_zero(d):
            raise SingularModel("discriminant vanishes", {"model": self.to_json()["a"]})
        return self.c4 ** 3 / d

    def transform(self, T: Transform) -> "WModel":
        F = self.field
        r, s, t = (F.coerce(x) for x in (T.r, T.s, T.t))
        a1, a2, a3, a4, a6 = self.a
        ui = F.coerce(T.inverse_scale())
        u2 = ui * ui
        u3 = u2 * ui
        return WModel(
            F,
            (a1 + 2 * s) * ui,
            (a2 - s * a1 + 3 * r - s * s) * u2,
            (a3 + r * a1 + 2 * t) * u3,
            (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) * u2 * u2,
            (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1) * u3 * u3,
        )

    def base_change(self, L) -> "WModel":
        return self if L is self.field else WModel(L, *self.a)

    def valuations(self) -> list:
        return [self.field.valuation(x) for x in self.a]

    def is_integral(self) -> bool:
        return all(v >= 0 for v in self.valuations())

    def to_json(self) -> dict:
        F = self.field
        return {"a": [F.format(x) for x in self.a]}

    def __repr__(self) -> str:
        return f"WModel({', '.join(self.field.format(x) for x in self.a)})"


def invariants(W: WModel) -> tuple:
    d = W.disc
    if W.field.is_zero(d):
        raise SingularModel("discriminant vanishes", {"model": W.to_json()["a"]})
    return (W.b2, W.b4, W.b6, W.b8, d, W.c4, W.j)


def reduction_type(W: WModel) -> str:
    F = W.field
    if not W.is_integral():
        raise NonIntegralModel("model is not integral",
                               {"valuations": [fmt_val(v) for v in W.valuations()]})
    if F.valuation(W.disc) == 0:
        return GOOD
    if F.valuation(W.c4) == 0:
        return MULTIPLICATIVE
    return ADDITIVE


def roots_reduction(alpha, beta, gamma, F) -> str:
    """Reduction type of y^2 = (x - alpha)(x - beta)(x - gamma) from residues."""
    xs = [F.coerce(x) for x in (alpha, beta, gamma)]
    if min(F.valuation(x) for x in xs) < 0:
        raise NonIntegralModel("roots are not integral", {})
    same = [F.valuation(xs[i] - xs[j]) > 0 for i, j in ((0, 1), (0, 2), (1, 2))]
    k = sum(same)
    if k == 0:
        return GOOD
    if k == 1:
        return MULTIPLICATIVE
    return ADDITIVE


def psi3(W: WModel) -> KPoly:
    F = W.field
    return KPoly(F, [W.b8, 3 * W.b6, 3 * W.b4, W.b2, F.from_int(3)])


def psi3_reduction_type(W: WModel) -> str:
    """Reduction type read off the root multiplicities of the reduced psi_3."""
    F = W.field
    if F.residue_char == 3:
        raise ResidueCharThree("psi_3 criterion needs residue characteristic other than 3", {})
    if not W.is_integral():
        raise NonIntegralModel("model is not integral",
                               {"valuations": [fmt_val(v) for v in W.valuations()]})
    k = F.residue_field
    red = ResPoly(k, [F.reduce_unit(c) for c in psi3(W).c])
    mults = []
    for g, m in factor(red):
        sd = separable_degree(g)
        mults += [m * (g.degree() // sd)] * sd
    pattern = sorted(mults)
    if pattern == [1, 1, 1, 1]:
        return GOOD
    if pattern == [1, 3]:
        return MULTIPLICATIVE
    if pattern == [4]:
        return ADDITIVE
    raise PatternViolation("reduced psi_3 has an impossible root pattern", {"pattern": pattern})


def independent_type(W: WModel) -> str:
    return psi3_reduction_type(W) if W.field.residue_char == 2 else reduction_type(W)


# ----------------------------------------------------------------------------
# small helpers
# ----------------------------------------------------------------------------

def _root_valuations(h: KPoly) -> list:
    F = h.field
    pts = [(k, F.valuation(c)) for k, c in enumerate(h.c) if not F.is_zero(c)]
    np = newton_polygon_points(pts)
    return [INF] * np.z_multiplicity + np.root_valuations()


def _element_of_valuation(F, val) -> tuple:
    """(L, u) with L = F or F(pi_F^(1/d)) and v(u) = val."""
    k = Fraction(val) * F.E
    if k.denominator == 1:
        return F, F.pow_uniformizer(int(k))
    d = k.denominator
    z = KPoly.z(F)
    L = ExtField(z ** d - F.uniformizer(), name=f"w{getattr(F, 'depth', 0) + 1}")
    return L, L.gen() ** k.numerator


def _cut(g: KPoly, a) -> KPoly:
    """(g(x + a) - g(a)) / x: the other roots, shifted by the proxy a."""
    h = g.translate(a)
    return KPoly(g.field, h.c[1:])


def _isolated_root(g: KPoly, prec):
    """A root a of g (in the ground field) strictly farther from the other
    roots than they are from each other."""
    F = g.field
    for a in rational_roots(g, prec):
        h = _cut(g, a)
        vals = _root_valuations(h)
        if INF in vals or len(set(vals)) != 1:
            continue
        r = vals[0]
        if h.degree() == 2:
            c0, c1, c2 = h.c
            d = c1 * c1 - 4 * c0 * c2
            inner = F.valuation(d) / 2 if not F.is_zero(d) else INF
        else:
            inner = min(difference_valuations_oracle(h))
        if inner > r:
            return a
    raise NotPotentialMultiplicative("no root is isolated from the others", {"g": str(g)})


def distinguished_two_torsion(f: KPoly, prec=None):
    if f.degree() != 3:
        raise ValueError("expected a cubic")
    return _isolated_root(f.monic(), prec)


def distinguished_three_torsion(W: WModel, prec=None):
    return _isolated_root(psi3(W).monic(), prec)


def _kpart(F, E2: ExtField, x):
    """Coordinate of x in F for the basis {1, zeta} of the unramified
    quadratic E2/F, zeta a lift of a residue generator."""
    x = E2.coerce(x)
    zeta = getattr(E2, "_zeta", None)
    if zeta is None:
        C = E2.residue_field
        zeta = E2.lift(C.gen())
        E2._zeta = zeta
    z0, z1 = (list(zeta.p.c) + [F.zero(), F.zero()])[:2]
    x0, x1 = (list(x.p.c) + [F.zero(), F.zero()])[:2]
    c1 = x1 / z1
    return x0 - c1 * z0


def _point_in_min_disk(g: KPoly, prec):
    """(L, s): s in L lies in the minimal disk about the roots of the
    quadratic g; L/F is weakly totally ramified of degree <= 2."""
    F = g.field
    roots = rational_roots(g, prec)
    if roots:
        return F, roots[0]
    res = ramified_approx(g)
    if res.phi.degree() == 1:
        return F, -res.phi.coeff(0)
    return res.L, res.L.gen()


def _degree_over_base(L) -> tuple[int, int]:
    if isinstance(L, ExtField):
        return L.local_e(), L.local_f()
    return 1, 1


# ----------------------------------------------------------------------------
# semistable models
# ----------------------------------------------------------------------------

@dataclass
class SemistableResult:
    L: Any
    model: WModel
    reduction: str
    transform: Transform
    case: str
    input_model: WModel
    certificate: dict = dc_field(default_factory=dict)

    @property
    def e(self) -> int:
        return _degree_over_base(self.L)[0]

    @property
    def f(self) -> int:
        return _degree_over_base(self.L)[1]

    @property
    def degree(self) -> int:
        return self.e * self.f

    def to_json(self) -> dict:
        L = self.L
        if isinstance(L, ExtField):
            nf = L.normal_form
            ldesc = {"e": self.e, "f": self.f, "eisenstein": nf["eisenstein"],
                     "unramified": nf["unramified"], "tower": _tower_json(L)}
        else:
            ldesc = {"e": 1, "f": 1, "eisenstein": None, "unramified": [0, 1], "tower": []}
        return {"L": ldesc, "degree": self.degree, "reduction": self.reduction, "case": self.case,
                "model": self.model.to_json()["a"], "transform": self.transform.to_json(L),
                "certificate": self.certificate}


def _tower_json(L) -> list:
    out = []
    while isinstance(L, ExtField):
        out.append({"name": L.name, "h": [L.B.format(c) for c in L.h.c], "e": L.e, "f": L.f})
        L = L.B
    return list(reversed(out))


class _State:
    """Current field, model and accumulated transform.

    Over extension fields the parameters r, s, t are truncated at ``prec`` and
    the scale is carried as a truncated 1/u; both amount to composing with an
    integral change of coordinates with unit scale, which keeps exact
    coefficients small without affecting integrality or reduction type.
    """

    def __init__(self, W: WModel, prec):
        self.F = W.field
        self.W = W
        self.T = Transform.identity(W.field)
        self.prec = prec

    def extend(self, L) -> None:
        if L is self.F:
            return
        self.F = L
        self.W = self.W.base_change(L)
        self.T = self.T.over(L)

    def apply(self, T: Transform) -> None:
        F = self.F
        T = T.over(F)
        if isinstance(F, ExtField):
            r, s, t = (F.truncate(x, self.prec) for x in (T.r, T.s, T.t))
            u = T.u
            if u == F.one():
                ui = F.one()
            else:
                ui = F.truncate(u.inverse(), 4 - F.valuation(u))
                u = ui.inverse()
            T = Transform(u, r, s, t, ui)
        else:
            T = Transform(T.u, T.r, T.s, T.t, T.inverse_scale())
        self.W = self.W.transform(T)
        self.T = self.T.then(T)


def semistable_model(W: WModel, prec=None, attempts: int = 4) -> SemistableResult:
    """A semistable model over a separable weakly totally ramified L/K."""
    K = W.field
    jv = K.valuation(W.j)  # raises SingularModel
    p = K.residue_char
    if prec is None:
        prec = 2 * abs(K.valuation(W.disc)) + 2 * max(abs(v) for v in W.valuations() if v is not INF) + 16
    last_err: DomainError | None = None
    for _ in range(attempts):
        try:
            if p == 2:
                st, case = _char2(W, prec)
            elif p == 3:
                st, case = _char_not2(W, prec)
            else:
                st, case = _short_form(W, prec)
            res = _finish(W, st, case, jv)
            log.info("semistable model: case %s, degree %d, %s", case, res.degree, res.reduction)
            return res
        except Uncertified as exc:
            log.info("uncertified at precision %s (%s); retrying", prec, exc)
            last_err = exc
            prec = 2 * prec
    raise last_err  # type: ignore[misc]


def _finish(W: WModel, st: _State, case: str, jv) -> SemistableResult:
    L = st.F
    M = st.W
    if not M.is_integral():
        raise Uncertified("output model is not integral",
                          {"case": case, "valuations": [fmt_val(v) for v in M.valuations()]})
    red = independent_type(M)
    want = MULTIPLICATIVE if jv < 0 else GOOD
    if red != want:
        raise Uncertified("output model is not semistable of the expected type",
                          {"case": case, "reduction": red, "expected": want})
    e, f = _degree_over_base(L)
    if f != 1:
        raise Uncertified("extension is not weakly totally ramified", {"e": e, "f": f})
    if M.c4 ** 3 * L.coerce(W.disc) != L.coerce(W.c4) ** 3 * M.disc:
        raise AssertionError("j-invariant changed")  # pragma: no cover
    cert = {"criterion": "psi3" if L.residue_char == 2 else "discriminant", "v_j": fmt_val(jv),
            "v_disc": fmt_val(L.valuation(M.disc)), "v_c4": fmt_val(L.valuation(M.c4))}
    return SemistableResult(L, M, red, st.T, case, W, cert)


# -- residue characteristic not 2 or 3 ------------------------------------------

def _complete_square(st: _State) -> None:
    W = st.W
    half = Fraction(1, 2)
    st.apply(Transform(st.F.one(), st.F.zero(), -W.a1 * half, -W.a3 * half))


def _short_form(W: WModel, prec):
    st = _State(W, prec)
    _complete_square(st)
    st.apply(Transform(st.F.one(), -st.W.a2 * Fraction(1, 3), st.F.zero(), st.F.zero()))
    F = st.F
    A, B = st.W.a4, st.W.a6
    vA, vB = F.valuation(A), F.valuation(B)
    n = min(3 * vA if vA is not INF else INF, 2 * vB if vB is not INF else INF)
    L, u = _element_of_valuation(F, Fraction(n) / 12)
    st.extend(L)
    st.apply(Transform(u, L.zero(), L.zero(), L.zero()))
    return st, "short-form"


# -- residue characteristic 3 (odd residue characteristic in general) ------------

def _cubic_of(st: _State) -> KPoly:
    W = st.W
    F = st.F
    return KPoly(F, [W.a6, W.a4, W.a2, F.one()])


def _scale_roots(st: _State, rho) -> None:
    """Rescale so that u^2 has valuation rho."""
    L, u = _element_of_valuation(st.F, Fraction(rho) / 2)
    st.extend(L)
    st.apply(Transform(u, L.zero(), L.zero(), L.zero()))


def _odd_case1(st: _State, alpha) -> None:
    F = st.F
    st.apply(Transform(F.one(), alpha, F.zero(), F.zero()))
    g = _cut(_cubic_of(st), F.zero())
    rho = min(_root_valuations(g))
    _scale_roots(st, rho)


def _char_not2(W: WModel, prec):
    st = _State(W, prec)
    _complete_square(st)
    F = st.F
    f = _cubic_of(st)
    jv = F.valuation(W.j)
    if jv < 0:
        alpha = distinguished_two_torsion(f, prec)
        st.apply(Transform(F.one(), alpha, F.zero(), F.zero()))
        g = _cut(_cubic_of(st), F.zero())
        rho = min(_root_valuations(g))
        if Fraction(rho).denominator != 1:
            raise Uncertified("distinguished root gives a non-integral radius", {"r": fmt_val(rho)})
        _scale_roots(st, rho)
        return st, "2-torsion-multiplicative"
    roots = rational_roots(f, prec)
    if roots:
        _odd_case1(st, roots[0])
        return st, "rational-2-torsion"
    L1 = ExtField(f.monic(), name="a1")
    if L1.f == 1:
        st.extend(L1)
        _odd_case1(st, L1.gen())
        return st, "wtr-cubic"
    res = ramified_approx(f.monic())
    if res.phi.degree() != 1:
        raise Uncertified("unramified cubic without a K-point in its minimal disk", {})
    b = -res.phi.coeff(0)
    st.apply(Transform(F.one(), b, F.zero(), F.zero()))
    rho = min(_root_valuations(_cubic_of(st)))
    _scale_roots(st, rho)
    return st, "unramified-cubic"


# -- residue characteristic 2 ------------------------------------------------------

def _y_quadratic(W: WModel, x0) -> KPoly:
    a1, a2, a3, a4, a6 = W.a
    F = W.field
    return KPoly(F, [-(x0 ** 3 + a2 * x0 * x0 + a4 * x0 + a6), a1 * x0 + a3, F.one()])


def _flex_data(W: WModel, x0, y0):
    """Translate the 3-torsion point to (0, 0) and shear its tangent to y = 0.
    Returns (shear s, a, b) for the resulting y^2 + a xy + b y = x^3 (+ tiny)."""
    F = W.field
    W1 = W.transform(Transform(F.one(), x0, F.zero(), y0))
    if F.is_zero(W1.a3):
        raise Uncertified("a3 vanishes at the 3-torsion point", {})
    s = W1.a4 / W1.a3
    W2 = W1.transform(Transform(F.one(), F.zero(), s, F.zero()))
    return s, W2.a1, W2.a3


def _flex_scale(F, a, b):
    """(field, u) for the flex model: u = a, or u with v(u) = v(b)/3."""
    va, vb = F.valuation(a), F.valuation(b)
    if va is not INF and 3 * va <= vb:
        return F, a
    return _element_of_valuation(F, vb / 3)


def _case1(st: _State, x0, y0) -> None:
    F = st.F
    s, a, b = _flex_data(st.W, x0, y0)
    st.apply(Transform(F.one(), x0, s, y0))
    L, u = _flex_scale(F, a, b)
    st.extend(L)
    st.apply(Transform(u, L.zero(), L.zero(), L.zero()))


def _case1_via_y(st: _State, x0, prec) -> str:
    """Case 1 after adjoining y0 when needed; unramified y0 is descended."""
    F = st.F
    q = _y_quadratic(st.W, x0)
    ys = rational_roots(q, prec)
    if ys:
        _case1(st, x0, ys[0])
        return "rational"
    F2 = ExtField(q.monic(), name=f"y{getattr(F, 'depth', 0) + 1}")
    if F2.f == 1:
        st.extend(F2)
        _case1(st, F2.coerce(x0), F2.gen())
        return "ramified-y"
    y0 = F2.gen()
    s, a, b = _flex_data(st.W.base_change(F2), F2.coerce(x0), y0)
    va, vb = F2.valuation(a), F2.valuation(b)
    val = va if (va is not INF and 3 * va <= vb) else vb / 3
    L, u = _element_of_valuation(F, val)
    st.apply(Transform(F.one(), x0, _kpart(F, F2, s), _kpart(F, F2, y0)))
    st.extend(L)
    st.apply(Transform(u, L.zero(), L.zero(), L.zero()))
    return "descended-y"


def _char2(W: WModel, prec):
    st = _State(W, prec)
    K = st.F
    psi = psi3(W).monic()
    if K.valuation(W.j) < 0:
        x0 = distinguished_three_torsion(W, prec)
        how = _case1_via_y(st, x0, prec)
        return st, f"3-torsion-multiplicative/{how}"
    roots = rational_roots(psi, prec)
    if roots:
        how = _case1_via_y(st, roots[0], prec)
        return st, f"rational-psi3-root/{how}"
    K1 = _wtr_root_field(psi)
    if K1 is not None:
        psi1 = KPoly(K1, [K1.coerce(c) for c in psi.c])
        rts = rational_roots(psi1, prec)
        if not rts:
            raise Uncertified("no psi_3 root found in the weakly totally ramified field", {})
        st.extend(K1)
        how = _case1_via_y(st, rts[0], prec)
        return st, f"wtr-psi3-root/{how}"
    _case5(st, psi, prec)
    return st, "equispaced-psi3" + ("/char0" if K.char == 0 else "/char2")


def _wtr_root_field(psi: KPoly):
    """Field K[z]/(g) of a local factor g of psi with trivial residue
    extension, least degree first; None when no such factor exists."""
    brs = sorted(local_branches(psi), key=lambda b: b.degree)
    for br in brs:
        if br.degree not in (2, 4):
            continue
        key = certified_factor(psi, br)
        L = ExtField(key.monic(), name="x1")
        if L.f == 1:
            return L
    return None


def _case5(st: _State, psi: KPoly, prec) -> None:
    K = st.F
    phi, r, _how = equispaced_quartic(psi)
    if phi.degree() == 1:
        F1, c = K, -phi.coeff(0)
    else:
        F1 = ExtField(phi.monic(), name="c1")
        c = F1.gen()
    st.extend(F1)
    L, u = _element_of_valuation(F1, Fraction(r) / 2)
    st.extend(L)
    st.apply(Transform(u, L.coerce(c), L.zero(), L.zero()))
    F = st.F
    if F.char == 0:
        half = Fraction(1, 2)
        st.apply(Transform(F.one(), F.zero(), -st.W.a1 * half, -st.W.a3 * half))
        W = st.W
        z = KPoly.z(F)
        if F.valuation(4 * W.a2) == 0:
            L2, s = _point_in_min_disk(z * z - W.a2, prec)
            st.extend(L2)
            s = L2.coerce(s)
            t = st.W.a4 / (2 * s)
        else:
            L2, t = _point_in_min_disk(z * z - W.a6, prec)
            st.extend(L2)
            t = L2.coerce(t)
            s = st.W.a4 / (2 * t)
        st.apply(Transform(L2.one(), L2.zero(), s, t))
        return
    W = st.W
    z = KPoly.z(F)
    if F.valuation(W.a1) == 0:
        L2, s = _point_in_min_disk(z * z + W.a1 * z + W.a2, prec)
        st.extend(L2)
        W = st.W
        s = L2.coerce(s)
        t = (W.a4 + s * W.a3) / W.a1
    else:
        L2, t = _point_in_min_disk(z * z + W.a3 * z + W.a6, prec)
        st.extend(L2)
        W = st.W
        t = L2.coerce(t)
        s = (W.a4 + t * W.a1) / W.a3
    st.apply(Transform(L2.one(), L2.zero(), s, t))
