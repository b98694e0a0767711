"""MacLane inductive valuations and certified finite extensions.

An :class:`IndVal` is a chain of augmentations
``[v, V_1(phi_1) = mu_1], ..., [V_{n-1}, V_n(phi_n) = mu_n]`` over a valued
field.  Chains are kept *reduced*: consecutive key polynomials have strictly
increasing degree, a same-degree key replacing the previous stage.

Residue data
------------
For each stage ``i`` we cache the value group ``(1/e_i)Z``, the constant
field ``C_i`` of the graded algebra (a finite field, or Q in residue
characteristic zero), and the normalising polynomials

* ``Q_i``     a monomial of value ``tau_i * mu_i`` in the earlier keys,
* ``Qinv_i``  its equivalence reciprocal modulo ``phi_i``,
* ``X_i``     ``Qinv_i * phi_i^tau_i``, whose image generates ``C_i[y]``.

Monomials ``pi^a0 * prod phi_j^b_j`` always use ``0 <= b_j < tau_j``; this
pins the constant in residual polynomials so that outputs are reproducible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable

from .base_field import INF, BaseField, fmt_val, val
from .errors import (
    ChainBudgetExceeded,
    InfiniteValue,
    DegreeTooLargeOverQ,
    InvalidKey,
    KeyValueTooSmall,
    NotAUnit,
    NotIrreducible,
    PrimitiveSearchExhausted,
    Uncertified,
)
from .kpoly import (
    KPoly,
    newton_polygon_points,
    phi_expansion,
    poly_gcd,
    poly_invmod,
    resultant,
)
from .residue_poly import (
    Embedding,
    FqField,
    RationalResidueField,
    ResPoly,
    factor,
    fp_solve,
    roots_in_field,
)

log = logging.getLogger("ramapprox.maclane")


# ----------------------------------------------------------------------------
# stages
# ----------------------------------------------------------------------------

@dataclass(eq=False)
class Stage:
    phi: KPoly
    mu: Any
    e_prev: int
    tau: int
    f_rel: int
    C: Any
    iota: Embedding | None = None
    xi: Any = None
    psi: ResPoly | None = None
    Q: KPoly | None = None
    Qinv: KPoly | None = None
    X: KPoly | None = None

    @property
    def e(self) -> int:
        return self.e_prev * self.tau

    @property
    def terminal(self) -> bool:
        return self.mu is INF

    @property
    def degree(self) -> int:
        return self.phi.degree()


def _tau_of(mu, e_prev: int) -> int:
    return Fraction(mu * e_prev).denominator


class IndVal:
    """An inductive (semi)valuation on K[z]; immutable."""

    def __init__(self, base, pairs: Iterable[tuple[KPoly, Any]], *, check: bool = True):
        self.base = base
        self.stages: list[Stage] = []
        self._vcache: dict = {}
        self._ecache: dict = {}
        for phi, mu in pairs:
            self._push(phi, val(mu) if not isinstance(mu, Fraction) and mu is not INF else mu, check)
        if not self.stages:
            raise InvalidKey("an inductive valuation needs at least one stage")

    # -- construction ---------------------------------------------------------
    def _push(self, phi: KPoly, mu, check: bool) -> None:
        i = len(self.stages) + 1
        base = self.base
        if phi.field is not base and phi.field != base:
            phi = KPoly(base, phi.c)
        if not phi.is_monic():
            raise InvalidKey("key polynomials must be monic", {"stage": i})
        if self.stages and self.stages[-1].terminal:
            raise InvalidKey("cannot augment a terminal stage", {"stage": i})
        if i == 1:
            if phi.degree() != 1:
                raise InvalidKey("the first key polynomial must be linear", {"degree": phi.degree()})
            e_prev = base.E
            C = base.residue_field
            st = Stage(phi, mu, e_prev, 1, 1, C)
        else:
            prev = self.stages[-1]
            if check:
                pv = self.value(i - 1, phi)
                if mu is not INF and mu <= pv:
                    raise KeyValueTooSmall(
                        f"key value {fmt_val(mu)} does not exceed V_{i - 1}(phi) = {fmt_val(pv)}",
                        {"stage": i, "mu": fmt_val(mu), "previous_value": fmt_val(pv)},
                    )
            psi = self.residual(phi, i - 1).monic()
            d = psi.degree()
            if phi.degree() != prev.tau * d * prev.degree or not psi.coeffs or psi.field.is_zero(psi.coeffs[0]):
                raise InvalidKey("not a key polynomial (degree/residual mismatch)",
                                 {"stage": i, "residual": str(psi)})
            facs = factor(psi)
            if len(facs) != 1 or facs[0][1] != 1:
                raise InvalidKey("residual polynomial of the key is reducible",
                                 {"stage": i, "residual": str(psi)})
            C0 = prev.C
            if d == 1:
                C, iota, xi = C0, None, C0.neg(psi.coeffs[0])
            elif isinstance(C0, RationalResidueField):
                raise DegreeTooLargeOverQ("residue extensions of Q are not supported",
                                          {"stage": i, "residual": str(psi)})
            else:
                C = FqField(C0.p, C0.f * d)
                iota = C0.embedding_into(C)
                image = ResPoly(C, [iota(c) for c in psi.coeffs])
                xi = sorted(roots_in_field(image))[0]
            st = Stage(phi, mu, prev.e, 1, d, C, iota, xi, psi)
        if mu is not INF:
            st.tau = _tau_of(mu, st.e_prev)
            self.stages.append(st)
            st.Q = self.mon(i - 1, st.tau * mu)
            st.Qinv = self._recip(i, st.Q)
            st.X = st.Qinv * phi ** st.tau
        else:
            self.stages.append(st)
        if check and i >= 2:
            a, b = self.stages[-2], st
            if b.mu is not INF and not (b.mu * a.degree > a.mu * b.degree):
                raise KeyValueTooSmall("key-value growth inequality fails", {"stage": i})

    # -- basic data ---------------------------------------------------------
    def __len__(self) -> int:
        return len(self.stages)

    @property
    def n(self) -> int:
        return len(self.stages)

    def stage(self, i: int) -> Stage:
        return self.stages[i - 1]

    @property
    def last(self) -> Stage:
        return self.stages[-1]

    @property
    def is_terminal(self) -> bool:
        return self.last.terminal

    def pairs(self) -> list[tuple[KPoly, Any]]:
        return [(s.phi, s.mu) for s in self.stages]

    def keys(self) -> list[KPoly]:
        return [s.phi for s in self.stages]

    def values(self) -> list:
        return [s.mu for s in self.stages]

    def ramification_index(self, i: int | None = None) -> int:
        """e(V_i / v), relative to the coefficient field."""
        i = self.n if i is None else i
        e = 1
        for s in self.stages[:i]:
            if not s.terminal:
                e *= s.tau
        return e

    def residue_degree(self, i: int | None = None) -> int:
        """Degree of the constant field C_i over the residue field of the base."""
        i = self.n if i is None else i
        f = 1
        for s in self.stages[:i]:
            f *= s.f_rel
        return f

    def __repr__(self) -> str:
        inner = ", ".join(f"({s.phi}, {fmt_val(s.mu)})" for s in self.stages)
        return f"IndVal[{inner}]"

    def to_json(self) -> list[dict]:
        F = self.base
        return [
            {"phi": [F.format(c) for c in s.phi.c], "mu": fmt_val(s.mu),
             "tau": s.tau if not s.terminal else None, "f_rel": s.f_rel}
            for s in self.stages
        ]

    # -- evaluation -----------------------------------------------------------
    def expand(self, i: int, g: KPoly) -> list[KPoly]:
        key = (i, g.c)
        out = self._ecache.get(key)
        if out is None:
            out = phi_expansion(g, self.stage(i).phi)
            if len(self._ecache) > 20000:
                self._ecache.clear()
            self._ecache[key] = out
        return out

    def value(self, i: int, g: KPoly):
        """V_i(g); V_0 is the valuation of the coefficient field on constants."""
        if g.is_zero():
            return INF
        while i > 0 and g.degree() < self.stages[i - 1].degree:
            i -= 1
        if i == 0:
            if g.degree() > 0:
                raise ValueError("V_0 is only defined on constants")
            return self.base.valuation(g.c[0])
        key = (i, g.c)
        hit = self._vcache.get(key)
        if hit is not None:
            return hit
        st = self.stage(i)
        cs = self.expand(i, g)
        if st.terminal:
            out = self.value(i - 1, cs[0]) if cs[0] else INF
        else:
            out = INF
            mu = st.mu
            for m, c in enumerate(cs):
                if c:
                    w = self.value(i - 1, c) + m * mu
                    if w < out:
                        out = w
        if len(self._vcache) > 50000:
            self._vcache.clear()
        self._vcache[key] = out
        return out

    def __call__(self, g: KPoly):
        return self.value(self.n, g)

    evaluate = __call__

    # -- monomials and reciprocals -------------------------------------------
    def mon_exponents(self, i: int, gamma) -> tuple[int, list[int]]:
        gamma = Fraction(gamma)
        exps = [0] * i
        for j in range(i, 0, -1):
            st = self.stage(j)
            x = gamma * st.e_prev
            m = st.mu * st.e_prev
            b = next((b for b in range(st.tau) if (x - b * m).denominator == 1), None)
            if b is None:
                raise ValueError(f"{gamma} is not in the value group of stage {j}")
            exps[j - 1] = b
            gamma -= b * st.mu
        a0 = gamma * self.base.E
        if a0.denominator != 1:
            raise ValueError("value not in the value group of the base")
        return int(a0), exps

    def mon(self, i: int, gamma) -> KPoly:
        """The normalised monomial of value ``gamma`` in the keys phi_1..phi_i."""
        a0, exps = self.mon_exponents(i, gamma)
        F = self.base
        out = KPoly(F, [F.pow_uniformizer(a0)])
        for j, b in enumerate(exps, start=1):
            if b:
                out = out * self.stage(j).phi ** b
        return out

    def _recip(self, i: int, U: KPoly) -> KPoly:
        """Equivalence reciprocal of U (deg U < deg phi_i) modulo phi_i."""
        return poly_invmod(U, self.stage(i).phi)

    # -- reduction maps ---------------------------------------------------------
    def theta(self, i: int, U: KPoly):
        """Residue in C_i of U with deg U < deg phi_i and V_{i-1}(U) = 0."""
        st = self.stage(i)
        if i == 1:
            return self.base.reduce_unit(U.coeff(0))
        r = self.reduce(i - 1, U)
        C = st.C
        out = C.zero()
        iota = st.iota
        for c in reversed(r.coeffs):
            out = C.add(C.mul(out, st.xi), iota(c) if iota is not None else c)
        return out

    def reduce(self, i: int, g: KPoly) -> ResPoly:
        """Image of g (with V_i(g) = 0) in C_i[y], y the class of X_i."""
        st = self.stage(i)
        C = st.C
        cs = self.expand(i, g)
        out = []
        for k in range(0, (len(cs) - 1) // st.tau + 1):
            c = cs[k * st.tau]
            if c and self.value(i - 1, c) + k * st.tau * st.mu == 0:
                out.append(self.theta(i, (c * st.Q ** k) % st.phi))
            else:
                out.append(C.zero())
        return ResPoly(C, out)

    def residual(self, g: KPoly, i: int | None = None) -> ResPoly:
        """Residual polynomial R_i(g) over C_i (nonzero constant term)."""
        i = self.n if i is None else i
        st = self.stage(i)
        lam = self.value(i, g)
        if lam is INF:
            raise InfiniteValue("residual polynomial of a polynomial of infinite value", {})
        if st.terminal:
            raise ValueError("residual polynomials are defined at finite stages only")
        cs = self.expand(i, g)
        vals = [self.value(i - 1, c) + m * st.mu if c else INF for m, c in enumerate(cs)]
        S = [m for m, w in enumerate(vals) if w == lam]
        m0 = S[0]
        nu = vals[m0] - m0 * st.mu
        M = self._recip(i, self.mon(i - 1, nu))
        C = st.C
        out = []
        for k in range(0, (S[-1] - m0) // st.tau + 1):
            m = m0 + k * st.tau
            if m in S:
                out.append(self.theta(i, (cs[m] * st.Q ** k * M) % st.phi))
            else:
                out.append(C.zero())
        return ResPoly(C, out)

    def residual_full(self, g: KPoly, i: int | None = None) -> tuple[int, ResPoly]:
        """(m0 // tau-offset, R) such that the full image is y^shift * R."""
        i = self.n if i is None else i
        st = self.stage(i)
        lam = self.value(i, g)
        cs = self.expand(i, g)
        m0 = next(m for m, c in enumerate(cs) if c and self.value(i - 1, c) + m * st.mu == lam)
        return m0, self.residual(g, i)

    # -- lifting --------------------------------------------------------------
    def lift0(self, i: int, a) -> KPoly:
        """A polynomial L with deg L < deg phi_i, V_{i-1}(L) = 0 and theta_i(L) = a."""
        st = self.stage(i)
        F = self.base
        C = st.C
        if C.is_zero(a):
            return KPoly(F, [])
        if i == 1:
            return KPoly(F, [F.lift(a)])
        prev = self.stage(i - 1)
        if st.f_rel == 1:
            b = [self._pull(st, a)]
        else:
            b = self._decompose(st, prev, a)
        out = KPoly(F, [])
        power = KPoly(F, [F.one()])
        for k, bk in enumerate(b):
            if k:
                power = (power * prev.X) % st.phi
            if not prev.C.is_zero(bk):
                out = out + (self.lift0(i - 1, bk) * power) % st.phi
        return out

    @staticmethod
    def _pull(st: Stage, a):
        if st.iota is None:
            return a
        raise AssertionError("unreachable")  # pragma: no cover

    def _decompose(self, st: Stage, prev: Stage, a) -> list:
        """Coordinates of a in the basis xi^k (k < f_rel) over C_{i-1}."""
        C, C0 = st.C, prev.C
        basis = getattr(st, "_basis", None)
        if basis is None:
            cols = []
            xk = C.one()
            for k in range(st.f_rel):
                for j in range(C0.f):
                    ej = tuple(1 if t == j else 0 for t in range(C0.f))
                    cols.append(C.mul(st.iota(ej), xk))
                xk = C.mul(xk, st.xi)
            basis = cols
            st._basis = basis
        rows = [[basis[c][r] for c in range(len(basis))] for r in range(C.f)]
        sol = fp_solve(rows, list(a), C.p)
        out = []
        for k in range(st.f_rel):
            out.append(tuple(sol[k * C0.f:(k + 1) * C0.f]))
        return out

    def lift_key(self, psi: ResPoly, i: int | None = None) -> KPoly:
        """A key polynomial for V_i whose residual polynomial is a multiple of psi."""
        i = self.n if i is None else i
        st = self.stage(i)
        psi = psi.monic()
        d = psi.degree()
        if d < 1 or psi.field.is_zero(psi.coeffs[0]):
            raise InvalidKey("psi must be nonconstant and prime to y", {"psi": str(psi)})
        phi = st.phi
        out = phi ** (d * st.tau)
        for k in range(d):
            a = psi.coeffs[k]
            if psi.field.is_zero(a):
                continue
            term = (self.lift0(i, a) * st.Q ** (d - k)) % phi
            out = out + term * phi ** (k * st.tau)
        return out

    # -- keys and augmentation ----------------------------------------------------
    def key_class(self, phi: KPoly) -> str | None:
        """'same' for a same-degree key, 'new' for a proper key, None otherwise."""
        st = self.last
        if st.terminal or not phi.is_monic() or phi.degree() < 1:
            return None
        if phi.degree() == st.degree:
            # same class: phi = phi_n + a with V_n(a) >= mu_n
            return "same" if self.value(self.n, phi - st.phi) >= st.mu else None
        try:
            psi = self.residual(phi).monic()
        except Exception:  # pragma: no cover - defensive
            return None
        if psi.field.is_zero(psi.coeffs[0]) if psi.coeffs else True:
            return None
        if phi.degree() != st.tau * psi.degree() * st.degree:
            return None
        facs = factor(psi)
        return "new" if len(facs) == 1 and facs[0][1] == 1 else None

    def is_key(self, phi: KPoly) -> bool:
        return self.key_class(phi) is not None

    def augment(self, phi: KPoly, mu) -> "IndVal":
        """[V, V'(phi) = mu]; a same-degree key replaces the last stage."""
        mu = mu if mu is INF else val(mu)
        cls = self.key_class(phi)
        if cls is None:
            raise InvalidKey(f"{phi} is not a key polynomial for this valuation", {"phi": str(phi)})
        cur = self.value(self.n, phi)
        if mu is not INF and mu <= cur:
            raise KeyValueTooSmall(f"key value {fmt_val(mu)} <= V(phi) = {fmt_val(cur)}",
                                   {"mu": fmt_val(mu), "value": fmt_val(cur)})
        if mu is INF and cur is INF:
            pass
        if cls == "same":
            pairs = self.pairs()[:-1] + [(phi, mu)]
        else:
            pairs = self.pairs() + [(phi, mu)]
        return IndVal(self.base, pairs)

    def truncate(self, i: int) -> "IndVal":
        return IndVal(self.base, self.pairs()[:i], check=False)

    # -- diskoid data -----------------------------------------------------------
    def nested_parameters(self) -> list[tuple]:
        """(s_i, mu_{i+1}) with s_i = mu_i deg phi_{i+1} / deg phi_i for consecutive stages."""
        out = []
        for a, b in zip(self.stages, self.stages[1:]):
            if a.terminal:
                break
            out.append((a.mu * b.degree / a.degree, b.mu))
        return out


# ----------------------------------------------------------------------------
# the method of approximants and local branches
# ----------------------------------------------------------------------------

DEFAULT_BUDGET = 400


def _first_stage_np(f: KPoly):
    F = f.field
    pts = [(j, F.valuation(c)) for j, c in enumerate(f.c) if c != F.zero()]
    return newton_polygon_points(pts)


def _np_over(V: IndVal, f: KPoly, phi: KPoly):
    cs = phi_expansion(f, phi)
    pts = [(j, V(c)) for j, c in enumerate(cs) if c]
    return newton_polygon_points(pts), cs


def approximants(f: KPoly, budget: int = DEFAULT_BUDGET) -> IndVal:
    """The reduced approximant chain of a monic locally irreducible f.

    Raises :class:`NotIrreducible` with a certificate when a stage exhibits a
    splitting of f.
    """
    F = f.field
    if not f.is_monic() or f.degree() < 1:
        raise ValueError("f must be monic and nonconstant")
    n = f.degree()
    if n == 1:
        return IndVal(F, [(f, INF)])
    df = f.derivative()
    if df:
        g = poly_gcd(f, df)
        if g.degree() > 0:
            raise NotIrreducible("f has a repeated factor", {"stage": 0, "gcd": str(g)})
    z = KPoly.z(F)
    if f.coeff(0) == F.zero():
        raise NotIrreducible("f is divisible by z", {"stage": 1, "factor": "z"})
    np0 = _first_stage_np(f)
    if len(np0.segments) != 1:
        raise NotIrreducible("first Newton polygon has several slopes",
                             {"stage": 1, "newton_polygon": np0.to_json()})
    V = IndVal(F, [(z, -np0.segments[0][0])])
    for step in range(budget):
        st = V.last
        R = V.residual(f)
        facs = factor(R)
        log.debug("stage %d: phi=%s mu=%s residual=%s", V.n, st.phi, fmt_val(st.mu), R)
        if len(facs) != 1:
            raise NotIrreducible("residual polynomial has several irreducible factors", {
                "stage": V.n, "residual": str(R),
                "factors": [[str(h), k] for h, k in facs]})
        psi, k = facs[0]
        d = psi.degree()
        if n == st.tau * d * st.degree:
            log.debug("certified irreducible after %d stages", V.n)
            return V.augment(f, INF)
        phi = V.lift_key(psi)
        np1, cs = _np_over(V, f, phi)
        if not cs[0]:
            raise NotIrreducible("f has an exact factor", {"stage": V.n + 1, "factor": str(phi)})
        if len(np1.segments) != 1:
            raise NotIrreducible("Newton polygon has several slopes", {
                "stage": V.n + 1, "phi": str(phi), "newton_polygon": np1.to_json()})
        mu = -np1.segments[0][0]
        if mu <= V(phi):
            raise NotIrreducible("key value does not increase", {"stage": V.n + 1, "phi": str(phi)})
        V = V.augment(phi, mu)
    raise ChainBudgetExceeded("approximant budget exhausted", {"budget": budget, "chain": V.to_json()})


@dataclass
class Branch:
    """One local factor of f, approximated at a finite stage of MacLane's tree.

    ``V`` is an inductive valuation, ``psi`` an irreducible factor of the
    residual polynomial of f with multiplicity ``k``.  The branch accounts for
    ``degree = k * deg(psi) * tau * deg(phi)`` roots of f.  When ``k == 1`` the
    branch is resolved: the local factor is irreducible with chain
    ``V + (factor, inf)`` and ``key`` has the same chain shape.
    """

    V: IndVal | None
    psi: ResPoly | None
    k: int
    degree: int
    key: KPoly
    exact: bool = False

    @property
    def resolved(self) -> bool:
        return self.exact or self.k == 1

    def chain_for_factor(self) -> IndVal:
        """Approximant chain of the branch's local factor with ``key`` standing
        in for the (generally transcendental) factor itself."""
        if self.exact:
            if self.V is None:
                return IndVal(self.key.field, [(self.key, INF)])
            return self.V.augment(self.key, INF)
        return self.V.augment(self.key, INF)


def local_branches(f: KPoly, budget: int = DEFAULT_BUDGET) -> list[Branch]:
    """Resolved local branches of a squarefree f (Montes-style splitting)."""
    F = f.field
    if f.degree() < 1:
        return []
    f = f.monic()
    out: list[Branch] = []
    z = KPoly.z(F)
    zm = 0
    while f.coeff(zm) == F.zero():
        zm += 1
    if zm:
        if zm > 1:
            raise NotIrreducible("f is not squarefree", {"factor": "z", "multiplicity": zm})
        out.append(Branch(None, None, 1, 1, z, exact=True))
        f = KPoly(F, f.c[1:], _trusted=True)
        if f.degree() < 1:
            return out
    np0 = _first_stage_np(f)
    work = []
    for slope, length in np0.segments:
        V = IndVal(F, [(z, -slope)])
        work.append(V)
    steps = 0
    while work:
        V = work.pop(0)
        R = V.residual(f)
        for psi, k in factor(R):
            steps += 1
            if steps > budget:
                raise ChainBudgetExceeded("branch budget exhausted", {"budget": budget})
            st = V.last
            deg = k * psi.degree() * st.tau * st.degree
            key = V.lift_key(psi)
            if k == 1:
                out.append(Branch(V, psi, 1, deg, key))
                continue
            np1, cs = _np_over(V, f, key)
            cur = V(key)
            if not cs[0]:
                out.append(Branch(V, psi, k, key.degree(), key, exact=True))
            for slope, length in np1.segments:
                mu = -slope
                if mu > cur:
                    work.append(V.augment(key, mu))
    return out


def refine_branch(f: KPoly, br: Branch) -> Branch:
    """One more approximation step for a resolved branch (k == 1)."""
    if br.exact:
        return br
    V = br.V
    np1, cs = _np_over(V, f, br.key)
    if not cs[0]:
        return Branch(V, br.psi, 1, br.degree, br.key, exact=True)
    cur = V(br.key)
    mus = [-s for s, ln in np1.segments if -s > cur]
    # the branch's own segment is the steepest one of length deg(key)/deg(key)
    mu = max(mus)
    W = V.augment(br.key, mu)
    R = W.residual(f)
    facs = factor(R)
    cand = [(h, k) for h, k in facs if k == 1 and k * h.degree() * W.last.tau * W.last.degree == br.degree]
    psi = cand[0][0]
    return Branch(W, psi, 1, br.degree, W.lift_key(psi))


# ----------------------------------------------------------------------------
# extension fields
# ----------------------------------------------------------------------------

class ExtElem:
    __slots__ = ("field", "p", "_hash")

    def __init__(self, field: "ExtField", poly: KPoly):
        self.field = field
        self.p = poly
        self._hash = None

    def _co(self, other):
        if isinstance(other, ExtElem) and other.field is self.field:
            return other
        return self.field.coerce(other)

    def __add__(self, other):
        other = self._co(other)
        return ExtElem(self.field, self.p + other.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._co(other)
        return ExtElem(self.field, self.p - other.p)

    def __rsub__(self, other):
        return self._co(other) - self

    def __neg__(self):
        return ExtElem(self.field, -self.p)

    def __mul__(self, other):
        other = self._co(other)
        a, b = self.p, other.p
        if a.degree() <= 0 or b.degree() <= 0:
            return ExtElem(self.field, a * b)
        return ExtElem(self.field, (a * b) % self.field.h)

    __rmul__ = __mul__

    def inverse(self):
        if not self.p:
            raise ZeroDivisionError("inverse of zero")
        if self.p.degree() == 0:
            return ExtElem(self.field, KPoly(self.p.field, [self.p.field.one() / self.p.c[0]]))
        return ExtElem(self.field, poly_invmod(self.p, self.field.h))

    def __truediv__(self, other):
        other = self._co(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, ExtElem):
            return other.field is self.field and self.p.c == other.p.c
        try:
            return self.p.c == self.field.coerce(other).p.c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.p.c)
        return self._hash

    def __bool__(self):
        return bool(self.p)

    def __repr__(self):
        return f"ExtElem({self.field.format(self)})"

    __str__ = __repr__


class ExtField(BaseField):
    """L = B[z]/(h) for a locally irreducible monic h over B, certified by its
    approximant chain.  Valuations are normalised so that v(pi_K) = 1."""

    _counter = 0

    def __init__(self, h: KPoly, chain: IndVal | None = None, name: str | None = None):
        B = h.field
        self.B = B
        self.h = h.monic()
        self.chain = chain if chain is not None else approximants(self.h)
        if not self.chain.is_terminal or self.chain.last.phi != self.h:
            raise Uncertified("chain does not terminate at h", {"h": str(h)})
        self.e = self.chain.ramification_index()
        self.f = self.chain.residue_degree()
        self.E = B.E * self.e
        self.depth = getattr(B, "depth", 0) + 1
        self.residue_field = self.chain.last.C
        self.char = B.char
        self.residue_char = B.residue_char
        self.p = getattr(B, "p", 0)
        self.name = name or f"a{self.depth}"
        self.spec = f"{getattr(B, 'spec', '?')}[{self.name}:{self.h}]"
        self._vmemo: dict = {}
        self._zero = ExtElem(self, KPoly(B, []))
        self._one = ExtElem(self, KPoly(B, [B.one()]))

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    @property
    def degree(self) -> int:
        return self.h.degree()

    def absolute_degree(self) -> int:
        d = self.degree
        B = self.B
        while isinstance(B, ExtField):
            d *= B.degree
            B = B.B
        return d

    def local_e(self) -> int:
        """Ramification index over the ground field K."""
        return self.E

    def local_f(self) -> int:
        f = self.f
        B = self.B
        while isinstance(B, ExtField):
            f *= B.f
            B = B.B
        return f

    def base_field(self):
        B = self.B
        while isinstance(B, ExtField):
            B = B.B
        return B

    @property
    def t(self):
        b = self.base_field()
        return b.t if hasattr(b, "t") else None

    # -- element plumbing ------------------------------------------------------
    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def from_int(self, n):
        return ExtElem(self, KPoly(self.B, [self.B.from_int(n)]))

    def gen(self) -> ExtElem:
        return ExtElem(self, KPoly.z(self.B) % self.h)

    def element(self, poly: KPoly) -> ExtElem:
        if poly.field is not self.B:
            poly = KPoly(self.B, poly.c)
        return ExtElem(self, poly % self.h)

    def coerce(self, x):
        if isinstance(x, ExtElem):
            if x.field is self:
                return x
            return ExtElem(self, KPoly(self.B, [self.B.coerce(x)]))
        return ExtElem(self, KPoly(self.B, [self.B.coerce(x)]))

    def is_element(self, x) -> bool:
        return isinstance(x, ExtElem) and x.field is self

    def is_zero(self, x) -> bool:
        return not x.p

    def format(self, x) -> str:
        from .kpoly import format_poly

        return format_poly(x.p, self.name)

    # -- valuation data ----------------------------------------------------------
    def valuation(self, x):
        x = self.coerce(x)
        key = x.p.c
        hit = self._vmemo.get(key)
        if hit is None:
            if len(self._vmemo) > 50000:
                self._vmemo.clear()
            hit = self.chain.value(self.chain.n, x.p)
            self._vmemo[key] = hit
        return hit

    def uniformizer(self) -> ExtElem:
        pi = getattr(self, "_pi", None)
        if pi is None:
            pi = self.element(self.chain.mon(self.chain.n - 1, Fraction(1, self.E)))
            self._pi = pi
        return pi

    def pow_uniformizer(self, k: int):
        return self.uniformizer() ** k

    def reduce_unit(self, x):
        from .errors import NegativeValuation

        x = self.coerce(x)
        v = self.valuation(x)
        if v < 0:
            raise NegativeValuation(f"negative valuation {fmt_val(v)}", {"valuation": fmt_val(v)})
        if v > 0:
            return self.residue_field.zero()
        return self.chain.theta(self.chain.n, x.p)

    def lift(self, a) -> ExtElem:
        return self.element(self.chain.lift0(self.chain.n, a))

    def truncate(self, x, N):
        """A representative of x modulo elements of valuation >= N with
        truncated base coefficients."""
        x = self.coerce(x)
        B = self.B
        if not hasattr(B, "truncate"):
            return x
        g = self.gen()
        vg = self.valuation(g)
        shift = max(Fraction(0), -vg) * self.degree if vg is not INF else 0
        M = N + shift + 1
        return ExtElem(self, KPoly(B, [B.truncate(c, M) for c in x.p.c]))

    # -- invariants ----------------------------------------------------------------
    def invariants(self) -> tuple[int, int]:
        return self.e, self.f

    @cached_property
    def normal_form(self) -> dict:
        """Two-step description: the residue modulus and an Eisenstein
        polynomial of the uniformizer over the unramified step (f = 1 only;
        otherwise its characteristic polynomial over B)."""
        B = self.B
        C = self.residue_field
        unram = list(getattr(C, "modulus", (0, 1)))
        pi = self.uniformizer()
        cp = charpoly(self, pi)
        return {"e": self.e, "f": self.f, "unramified": unram,
                "eisenstein": [B.format(c) for c in cp.c] if self.f == 1 else None,
                "uniformizer_charpoly": [B.format(c) for c in cp.c],
                "uniformizer": self.format(pi)}

    def to_json(self) -> dict:
        return {"h": [self.B.format(c) for c in self.h.c], "e": self.e, "f": self.f,
                "degree": self.degree, "chain": self.chain.to_json()}


def charpoly(L: ExtField, x: ExtElem) -> KPoly:
    """Characteristic polynomial of x over L.B, via Res_y(h(y), z - x(y))
    evaluated at deg h + 1 points and interpolated."""
    B = L.B
    n = L.degree
    pts = []
    for a in sample_points(B, n + 1):
        g = KPoly(B, [a]) - x.p
        pts.append((a, resultant(L.h, g)))
    poly = interpolate(B, pts)
    lc = poly.lc()
    return poly / lc


def sample_points(F, n: int) -> list:
    """n distinct elements of F: 0, 1, 2, ... in characteristic 0, and
    0, 1, t, t^2, ... in positive characteristic."""
    if F.char == 0:
        return [F.from_int(k) for k in range(n)]
    t = F.t
    if n > F.char and t is None:
        raise ValueError("not enough distinct sample points")
    out = [F.zero()]
    x = F.one()
    while len(out) < n:
        out.append(x)
        x = x * t
    return out


def interpolate(F, pts) -> KPoly:
    """Lagrange interpolation over the field F."""
    out = KPoly(F, [])
    for i, (xi, yi) in enumerate(pts):
        if yi == F.zero():
            continue
        num = KPoly(F, [F.one()])
        den = F.one()
        for j, (xj, _) in enumerate(pts):
            if j != i:
                num = num * KPoly(F, [-xj, F.one()])
                den = den * (xi - xj)
        out = out + num * (yi / den)
    return out


def ext_field(f: KPoly, name: str | None = None) -> ExtField:
    return ExtField(f.monic(), name=name)


def ext_invariants(V: IndVal) -> tuple[int, int]:
    if not V.is_terminal:
        raise ValueError("ext_invariants needs a terminal chain")
    return V.ramification_index(), V.residue_degree()


def ext_valuation(L: ExtField, g: KPoly):
    """v(g(alpha)) = v(Res(h, g)) / deg h for the distinguished root alpha of h."""
    if g.field is not L.B:
        g = KPoly(L.B, g.c)
    if g.is_zero():
        return INF
    r = resultant(L.h, g)
    return L.B.valuation(r) / L.degree if r != L.B.zero() else INF


def ext_residue(L: ExtField, g: KPoly):
    if g.field is not L.B:
        g = KPoly(L.B, g.c)
    x = L.element(g)
    if L.valuation(x) != 0:
        raise NotAUnit("element is not a unit", {"valuation": fmt_val(L.valuation(x))})
    return L.reduce_unit(x)


def resultant_in_z(B, F1, F2, deg_bound: int) -> KPoly:
    """R(z) = Res_x(F1(x, z), F2(x, z)) by interpolation; F1, F2 are callables
    mapping a point z0 in B to polynomials in x over B."""
    pts = []
    for a in sample_points(B, deg_bound + 1):
        pts.append((a, resultant(F1(a), F2(a))))
    return interpolate(B, pts)


def primitive_element(h1: KPoly, h2: KPoly):
    """Compositum of K[z]/(h1) and K[z]/(h2) as a relative tower.

    Returns ``(L, alpha, beta)`` with alpha, beta in L roots of h1 and of h2;
    L is ``K1[w]/(g)`` where K1 = K[z]/(h1) and g is a certified key for the
    local factor of h2 over K1 of least degree.
    """
    if h2.degree() == 1:
        L = ExtField(h1.monic())
        return L, L.gen(), L.coerce(-h2.monic().coeff(0))
    if h1.degree() == 1:
        L = ExtField(h2.monic())
        return L, L.coerce(-h1.monic().coeff(0)), L.gen()
    K1 = ExtField(h1.monic())
    h2L = KPoly(K1, [K1.coerce(c) for c in h2.c]).monic()
    brs = local_branches(h2L)
    if not brs:
        raise PrimitiveSearchExhausted("no local factor of h2 found", {"h2": str(h2)})
    br = min(brs, key=lambda b: (b.degree, not b.exact))
    if br.degree == 1:
        root = _linear_root(h2L, br)
        return K1, K1.gen(), root
    L = ExtField(_certified_factor(h2L, br), name=f"a{K1.depth + 1}")
    return L, L.coerce(K1.gen()), L.gen()


def _linear_root(f: KPoly, br: Branch):
    """Exact root when available; otherwise a Newton-refined proxy."""
    if br.exact:
        return -br.key.coeff(0)
    from .wtr import hensel_root

    return hensel_root(f, -br.key.coeff(0))


def _certified_factor(f: KPoly, br: Branch) -> KPoly:
    """A key polynomial Krasner-equivalent to the branch's local factor."""
    if br.exact:
        return br.key
    if br.degree == 1:
        return br.key
    from .diskoid import root_difference_valuations, m_phi

    cur = br
    for _ in range(60):
        key = cur.key
        try:
            deltas = root_difference_valuations(key)
        except NotIrreducible:
            cur = refine_branch(f, cur)
            continue
        M = m_phi(key, deltas)
        need = M.apply(max(deltas)) if deltas else Fraction(0)
        np1, cs = _np_over(cur.V, f, key)
        if not cs[0]:
            return key
        curv = cur.V(key)
        mus = [-s for s, ln in np1.segments if -s > curv]
        if mus and max(mus) > need:
            return key
        cur = refine_branch(f, cur)
    raise ChainBudgetExceeded("Krasner refinement did not converge", {"f": str(f)})


def certified_factor(f: KPoly, br: Branch) -> KPoly:
    return _certified_factor(f, br)
