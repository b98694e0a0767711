"""Independent reference computations used only by the tests.

Nothing here calls the routine it checks: determinants are expanded by
Gaussian elimination, valuations of rationals by repeated division, residue
factorizations by exhaustive trial division.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from ramapprox.base_field import INF
from ramapprox.kpoly import KPoly, phi_expansion
from ramapprox.maclane import IndVal


def ord_p_rational(x: Fraction, p: int):
    if x == 0:
        return INF
    n, d, k = x.numerator, x.denominator, 0
    while n % p == 0:
        n //= p
        k += 1
    while d % p == 0:
        d //= p
        k -= 1
    return Fraction(k)


def det(M, F):
    """Determinant over the field F by Gaussian elimination."""
    M = [row[:] for row in M]
    n = len(M)
    sign = F.one()
    out = F.one()
    for c in range(n):
        piv = next((r for r in range(c, n) if not F.is_zero(M[r][c])), None)
        if piv is None:
            return F.zero()
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        out = out * M[c][c]
        inv = F.one() / M[c][c]
        for r in range(c + 1, n):
            if not F.is_zero(M[r][c]):
                k = M[r][c] * inv
                M[r] = [a - k * b for a, b in zip(M[r], M[c])]
    return out * sign


def sylvester(f: KPoly, g: KPoly, m: int | None = None, n: int | None = None):
    """Sylvester matrix of f, g viewed with formal degrees m, n."""
    F = f.field
    m = f.degree() if m is None else m
    n = g.degree() if n is None else n
    fc = [f.coeff(i) for i in range(m, -1, -1)]
    gc = [g.coeff(i) for i in range(n, -1, -1)]
    size = m + n
    rows = []
    for i in range(n):
        rows.append([F.zero()] * i + fc + [F.zero()] * (size - m - 1 - i))
    for i in range(m):
        rows.append([F.zero()] * i + gc + [F.zero()] * (size - n - 1 - i))
    return rows


def sylvester_resultant(f: KPoly, g: KPoly, m=None, n=None):
    F = f.field
    M = sylvester(f, g, m, n)
    if not M:
        return F.one()
    return det(M, F)


def binary_form_resultant(f0: KPoly, f1: KPoly, d: int):
    """Res of the degree-d forms with dehomogenizations f0, f1."""
    return sylvester_resultant(f0, f1, d, d)


def stabilized_value(chain: IndVal, g: KPoly):
    """Value of g at the root of the chain's final key: raise the last finite
    key value until the phi-expansion minimum sits uniquely at m = 0."""
    pairs = chain.pairs()
    f = pairs[-1][0]
    if len(pairs) == 1:
        # f linear: plain evaluation
        return g.field.valuation(g(-f.coeff(0))) if not g.is_zero() else INF
    prev = IndVal(chain.base, pairs[:-1])
    cs = phi_expansion(g, f)
    vals = [prev(c) if not c.is_zero() else INF for c in cs]
    if vals[0] is INF:
        return INF
    mu = Fraction(1) + max(abs(v) for v in vals if v is not INF) * 2
    while True:
        terms = [v + m * mu for m, v in enumerate(vals) if v is not INF and m > 0]
        if all(t > vals[0] for t in terms):
            return vals[0]
        mu *= 2


def fp_trial_factor(coeffs: list[int], p: int) -> list[tuple[tuple[int, ...], int]]:
    """Monic irreducible factors with multiplicity over F_p by exhaustive
    trial division (coefficients low to high)."""

    def trim(a):
        a = [x % p for x in a]
        while a and a[-1] == 0:
            a.pop()
        return a

    def divmod_(a, b):
        a = trim(a)
        q = [0] * max(0, len(a) - len(b) + 1)
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b) and a:
            c = a[-1] * inv % p
            k = len(a) - len(b)
            q[k] = c
            for i, bi in enumerate(b):
                a[k + i] = (a[k + i] - c * bi) % p
            a = trim(a)
        return q, a

    a = trim(coeffs)
    lc = a[-1]
    inv = pow(lc, -1, p)
    a = [x * inv % p for x in a]
    out = []
    deg = 1
    while len(a) > 1:
        if 2 * deg > len(a) - 1:
            out.append((tuple(a), 1))
            break
        found = False
        for tail in itertools.product(range(p), repeat=deg):
            b = list(tail) + [1]
            q, r = divmod_(a, b)
            if not r:
                k = 0
                while True:
                    q2, r2 = divmod_(a, b)
                    if r2:
                        break
                    a = trim(q2)
                    k += 1
                out.append((tuple(b), k))
                found = True
        if not found:
            deg += 1
    return sorted(out)


def random_unit_int(rng: random.Random, p: int, bound: int) -> int:
    while True:
        u = rng.randrange(1, bound)
        if u % p:
            return u


def lagrange(K, pts):
    """Interpolating polynomial through pts [(x_i, y_i)] by the Lagrange formula."""
    out = KPoly(K, [])
    for i, (xi, yi) in enumerate(pts):
        term = KPoly(K, [yi])
        for j, (xj, _) in enumerate(pts):
            if j != i:
                term = term * KPoly(K, [-xj / (xi - xj), K.one() / (xi - xj)])
        out = out + term
    return out


def lower_hull_root_valuations(points):
    """Root valuations (with multiplicity) from the lower convex hull of
    [(k, v_k)], k ascending; entries with v = INF are skipped."""
    pts = [(k, Fraction(v)) for k, v in points if v is not INF]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out += [-(y2 - y1) / (x2 - x1)] * (x2 - x1)
    return sorted(out)


def displacement_oracle(f: KPoly, g: KPoly, samples):
    """Valuations v(beta - alpha) over roots alpha of f, beta of g (each
    alpha counted once per conjugate), from R(y) = Res_x(f(x), g(x + y))."""
    K = f.field
    n = f.degree() * g.degree()
    pts = []
    for y0 in samples[: n + 1]:
        shifted = KPoly(K, [])
        pw = KPoly(K, [K.one()])
        lin = KPoly(K, [y0, K.one()])
        for c in g.c:
            shifted = shifted + pw * c
            pw = pw * lin
        pts.append((y0, sylvester_resultant(f, shifted)))
    R = lagrange(K, pts)
    return lower_hull_root_valuations([(k, K.valuation(c)) for k, c in enumerate(R.c)])
