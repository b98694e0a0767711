"""Ramified Approximation and its companions.

``ramified_approx`` walks the approximant chain of f and returns the last key
polynomial phi_j whose field K[z]/(phi_j) is weakly totally wildly ramified,
together with a certificate that its roots lie in the minimal disk about the
roots of f.  Also here: the residue-characteristic-zero centre, the branch
following refinement for possibly reducible inputs, separable perturbation of
inseparable keys, the equispaced quartic construction, and exact Newton
refinement of K-rational root proxies.
"""

from __future__ import annotations

import logging

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import ceil

from .base_field import INF, fmt_val
from .diskoid import (
    Diskoid,
    MPhi,
    difference_valuations_oracle,
    make_diskoid,
    member,
    min_disk_radius,
    root_difference_valuations,
)
from .errors import (
    NoCertifiedCandidate,
    NotEquispaced,
    NotIrreducible,
    ResidueCharZero,
    Uncertified,
)
from .kpoly import KPoly, discriminant, newton_polygon_points
from .maclane import (
    Branch,
    ExtField,
    IndVal,
    approximants,
    certified_factor,
    ext_valuation,
    local_branches,
    refine_branch,
)

log = logging.getLogger("ramapprox.wtr")


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


@dataclass
class WtrResult:
    phi: KPoly
    L: ExtField
    j: int
    disk: Diskoid
    chain: IndVal
    perturbed: bool = False
    certificate: dict = dc_field(default_factory=dict)

    @property
    def e(self) -> int:
        return self.L.e

    @property
    def f(self) -> int:
        return self.L.f

    def to_json(self) -> dict:
        F = self.phi.field
        return {"phi": [F.format(c) for c in self.phi.c], "e": self.L.e, "f": self.L.f,
                "j": self.j, "disk": self.disk.to_json(), "perturbed": self.perturbed,
                "certificate": self.certificate}


def wtr_index(chain: IndVal, p: int) -> int:
    """Largest j with f_rel,i = 1 for i <= j and e(V_i) a p-power for i < j."""
    j = 0
    for i in range(1, chain.n + 1):
        if chain.stage(i).f_rel != 1:
            break
        if i > 1 and not _is_p_power(chain.ramification_index(i - 1), p):
            break
        j = i
    return j


def _certify(f: KPoly, phi: KPoly, r) -> tuple[bool, Diskoid]:
    """Diskoid D(phi, M_phi(r)) and whether it contains the roots of f."""
    deltas = root_difference_valuations(phi) if phi.degree() > 1 else []
    s = MPhi(deltas).apply(r)
    D = make_diskoid(phi, s)
    return member(D, f), D


def ramified_approx(f: KPoly) -> WtrResult:
    """Ramified Approximation for a locally irreducible f (residue char p > 0)."""
    F = f.field
    p = F.residue_char
    if p == 0:
        raise ResidueCharZero("residue characteristic zero: use char0_center", {})
    f = f.monic()
    chain = approximants(f)
    if f.degree() == 1:
        D = Diskoid(f, INF, INF, 1)
        return WtrResult(f, ExtField(f, chain), 1, D, chain, certificate={"member": True})
    j = wtr_index(chain, p)
    phi = chain.stage(j).phi
    r = min_disk_radius(f)
    perturbed = False
    if phi.degree() > 1 and not phi.derivative():
        phi = _perturb_in_disk(f, phi, r)
        perturbed = True
    ok, D = _certify(f, phi, r)
    if not ok:
        raise Uncertified("Ramified Approximation key failed the disk certificate",
                          {"phi": str(phi), "j": j})
    L = ExtField(phi)
    if L.f != 1 or not _is_p_power(L.e, p):
        raise Uncertified("key field is not weakly totally wildly ramified",
                          {"e": L.e, "f": L.f})
    cert = {"member": True, "radius": fmt_val(r), "s": fmt_val(D.s)}
    log.info("ramified approximation: j=%d phi=%s e=%d radius=%s", j, phi, L.e, fmt_val(r))
    return WtrResult(phi, L, j, D, chain, perturbed, cert)


def _perturb_in_disk(f: KPoly, phi: KPoly, r) -> KPoly:
    target = max(Fraction(1), Fraction(ceil(4 * (r if r is not INF else 1) * phi.degree())))
    for _ in range(12):
        g, _c = separable_perturb(phi, target)
        try:
            ok, _ = _certify(f, g, r)
        except NotIrreducible:
            ok = False
        if ok:
            return g
        target *= 2
    raise Uncertified("separable perturbation did not certify", {"phi": str(phi)})


def separable_perturb(f: KPoly, target) -> tuple[KPoly, object]:
    """f + c z with c = pi^ceil(target) (doubling until separable)."""
    F = f.field
    if f.derivative():
        return f, F.zero()
    k = int(ceil(Fraction(target)))
    z = KPoly.z(F)
    for _ in range(16):
        c = F.pow_uniformizer(k * F.E)
        g = f + z * c
        if discriminant(g) != F.zero():
            return g, c
        k *= 2
    raise Uncertified("no separable perturbation found", {"f": str(f)})


def displacement_valuations(f: KPoly, g: KPoly) -> list:
    """Root valuations of g(y + a) for a root a of the irreducible f."""
    L = ExtField(f.monic())
    gL = KPoly(L, [L.coerce(c) for c in g.c])
    shifted = gL.translate(L.gen())
    pts = [(k, L.valuation(c)) for k, c in enumerate(shifted.c) if c]
    np = newton_polygon_points(pts)
    return sorted(np.root_valuations())


def char0_center(f: KPoly):
    """-c_{n-1} / (n c_n): a K-point in the minimal disk (residue char 0)."""
    n = f.degree()
    if n < 1:
        raise ValueError("f must be nonconstant")
    return -f.coeff(n - 1) / (f.lc() * n)


def char0_certificate(f: KPoly, b) -> dict:
    """Exact check that b lies in the minimal disk about the roots of f:
    every root of f(z + b) has valuation >= min root difference."""
    F = f.field
    if f.degree() == 1:
        return {"ok": f(b) == F.zero(), "radius": "inf"}
    diffs = difference_valuations_oracle(f)
    r = diffs[0]
    g = f.translate(b)
    pts = [(k, F.valuation(c)) for k, c in enumerate(g.c) if c != F.zero()]
    np = newton_polygon_points(pts)
    vals = [INF] * np.z_multiplicity + np.root_valuations()
    m = min(vals)
    return {"ok": m >= r, "radius": fmt_val(r), "min_distance": fmt_val(m)}


def ax_refinement(f: KPoly, D: Diskoid) -> WtrResult:
    """An alpha in D with [K(alpha):K] at most the p-part of deg f."""
    F = f.field
    p = F.residue_char
    f = f.monic()
    n = f.degree()
    q = _p_part(n, p) if p else 1
    try:
        approximants(f)
        irreducible = True
    except NotIrreducible:
        irreducible = False
    if irreducible:
        res = ramified_approx(f)
        if not member(D, res.phi):
            raise NoCertifiedCandidate("key not in the given diskoid", {"phi": str(res.phi)})
        if res.phi.degree() > q:
            raise NoCertifiedCandidate("degree bound violated", {"q": q})
        return res
    brs = local_branches(f)

    def order(b: Branch):
        R = b.psi
        lex = tuple(reversed(R.coeffs)) if R is not None else ()
        return (_p_part(b.degree, p), b.degree, str(lex))

    for br in sorted(brs, key=order):
        if _p_part(br.degree, p) > q:
            continue
        for _ in range(n + 2):
            chain = br.chain_for_factor() if br.exact else br.V.augment(certified_factor(f, br), INF)
            j = wtr_index(chain, p)
            for jj in range(j, 0, -1):
                phi = chain.stage(jj).phi
                if phi.degree() > 1 and not phi.derivative():
                    continue
                if phi.degree() > q:
                    continue
                if member(D, phi):
                    L = ExtField(phi)
                    if L.f == 1 and _is_p_power(L.e, p):
                        return WtrResult(phi, L, jj, D, chain,
                                         certificate={"member": True, "branch_degree": br.degree, "q": q})
            if br.exact:
                break
            br = refine_branch(f, br)
    raise NoCertifiedCandidate("branch following found no certified candidate",
                               {"stage_budget": n, "q": q})


def equispaced_quartic(f: KPoly) -> tuple[KPoly, object, str]:
    """(min poly of alpha, r, case) for a quartic with equispaced roots."""
    F = f.field
    if F.residue_char != 2:
        raise ValueError("equispaced_quartic needs residue characteristic 2")
    f = f.monic()
    if f.degree() != 4:
        raise ValueError("f must be quartic")
    diffs = difference_valuations_oracle(f)
    if len(set(diffs)) != 1 or len(diffs) != 12:
        raise NotEquispaced("roots are not equispaced", {"differences": [fmt_val(d) for d in diffs]})
    r = diffs[0]
    try:
        chain = approximants(f)
    except NotIrreducible:
        chain = None
    if chain is not None:
        L = ExtField(f, chain)
        if L.f == 1:
            return f, r, "wtr-root"
        if L.e == 1:
            alpha = _k_point_in_min_disk(f)
            return KPoly(F, [-alpha, F.one()]), r, "unramified"
        if chain.n == 3 and chain.stage(2).degree == 2:
            phi2 = chain.stage(2).phi
            b = phi2.coeff(1)
            rr = ext_valuation(ExtField(phi2), KPoly(F, [b, F.from_int(2)]))
            if rr != r:
                raise NotEquispaced("difference valuation mismatch", {"r": fmt_val(r), "r2": fmt_val(rr)})
            return phi2, r, "quadratic-key"
        raise NotEquispaced("unexpected chain shape", {"chain": chain.to_json()})
    # product of two quadratics
    alpha = _k_point_in_min_disk(f)
    return KPoly(F, [-alpha, F.one()]), r, "split"


def _k_point_in_min_disk(f: KPoly):
    """A K-rational point of the minimal disk about the roots of f."""
    F = f.field
    r = min(difference_valuations_oracle(f))
    n = f.degree()
    brs = local_branches(f)
    for br in sorted(brs, key=lambda b: b.degree):
        chain = br.chain_for_factor() if br.exact else br.V.augment(certified_factor(f, br), INF)
        for i in range(chain.n, 0, -1):
            phi = chain.stage(i).phi
            if phi.degree() == 1:
                a = -phi.coeff(0)
                if F.valuation(f(a)) >= n * r:
                    return a
                break
    raise NoCertifiedCandidate("no K-point found in the minimal disk", {"f": str(f)})


# ----------------------------------------------------------------------------
# K-rational root proxies
# ----------------------------------------------------------------------------

def hensel_root(f: KPoly, a0, prec=None, max_iter: int = 64):
    """Newton-refine an approximate simple root a0 of f until v(f(a)) >= prec.

    Coefficients are truncated at each step to keep the arithmetic small.
    """
    F = f.field
    df = f.derivative()
    a = F.coerce(a0)
    d = F.valuation(df(a))
    if d is INF:
        raise NotIrreducible("derivative vanishes at the approximate root", {})
    prec = Fraction(prec) if prec is not None else 2 * d + 40
    for _ in range(max_iter):
        fa = f(a)
        vf = F.valuation(fa)
        if vf >= prec:
            return a
        if vf <= 2 * d:
            raise Uncertified("approximation too coarse for Newton refinement",
                              {"v_f": fmt_val(vf), "v_df": fmt_val(d)})
        a = a - fa / df(a)
        if hasattr(F, "truncate"):
            a = F.truncate(a, 2 * vf - d + 2)
    raise Uncertified("Newton refinement did not converge", {})


def rational_roots(f: KPoly, prec=None) -> list:
    """Proxies for the roots of f lying in the completion of K (simple roots).

    Exact roots are returned exactly; the others are refined until
    v(f(a)) >= prec.
    """
    F = f.field
    out = []
    for br in local_branches(f):
        if br.degree != 1:
            continue
        if br.exact:
            out.append(-br.key.coeff(0))
            continue
        cur = br
        for _ in range(200):
            a = -cur.key.coeff(0)
            if f(a) == F.zero():
                out.append(a)
                break
            d = F.valuation(f.derivative()(a))
            if F.valuation(f(a)) > 2 * d:
                out.append(hensel_root(f, a, prec))
                break
            cur = refine_branch(f, cur)
            if cur.exact:
                out.append(-cur.key.coeff(0))
                break
    return out
