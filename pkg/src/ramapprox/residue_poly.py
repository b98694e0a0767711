"""Residue fields and polynomials over them.

Finite fields F_q (q = p^f) are represented by an explicit monic irreducible
modulus over F_p; by default the least one in the order that compares the
coefficient vectors (c_{f-1}, ..., c_0) lexicographically.  Elements are
tuples of length ``f``.  The rational residue field (for Laurent series over
Q) uses :class:`fractions.Fraction` elements.

Factorisation over F_q is square-free decomposition followed by distinct-degree
and equal-degree splitting; factorisation over Q is restricted to degree 4.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import DegreeTooLargeOverQ
from .kernels import gf_divmod, gf_gcd, gf_monic, gf_mul, gf_mulmod, gf_sub, gf_trim


# ----------------------------------------------------------------------------
# prime field helpers
# ----------------------------------------------------------------------------

def _fp_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = gf_divmod(a, m, p)[1]
    while e:
        if e & 1:
            result = gf_mulmod(result, base, m, p)
        e >>= 1
        if e:
            base = gf_mulmod(base, base, m, p)
    return result


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_fp(poly: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a polynomial over F_p."""
    f = gf_monic(gf_trim([c % p for c in poly]), p)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for q in _prime_divisors(n):
        h = _fp_powmod(x, p ** (n // q), f, p)
        if len(gf_gcd(f, gf_sub(h, x, p), p)) != 1:
            return False
    return gf_sub(_fp_powmod(x, p ** n, f, p), x, p) == []


@lru_cache(maxsize=None)
def least_irreducible(p: int, f: int) -> tuple[int, ...]:
    """The least monic irreducible polynomial of degree ``f`` over F_p."""
    if f == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=f):
        coeffs = list(reversed(tail)) + [1]
        if coeffs[0] and is_irreducible_fp(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def fp_solve(rows: list[list[int]], rhs: list[int], p: int) -> list[int]:
    """Solve the square system ``rows * x = rhs`` over F_p (nonsingular)."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] % p)
        m[col], m[piv] = m[piv], m[col]
        inv = pow(m[col][col], p - 2, p)
        m[col] = [x * inv % p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] % p:
                c = m[r][col]
                m[r] = [(x - c * y) % p for x, y in zip(m[r], m[col])]
    return [m[r][n] % p for r in range(n)]


# ----------------------------------------------------------------------------
# residue fields
# ----------------------------------------------------------------------------

class FqField:
    """The finite field F_p[x]/(modulus)."""

    def __init__(self, p: int, f: int = 1, modulus: Sequence[int] | None = None):
        self.p = p
        self.f = f
        if modulus is None:
            modulus = least_irreducible(p, f)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        self.modulus = modulus
        self._mod = list(modulus)
        self.q = p ** f
        self.characteristic = p

    def __repr__(self) -> str:
        return f"FqField({self.p}, {self.f}, {list(self.modulus)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FqField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    # -- element plumbing -------------------------------------------------
    def _pack(self, lst: list[int]) -> tuple[int, ...]:
        return tuple(lst) + (0,) * (self.f - len(lst))

    def _unpack(self, a: tuple[int, ...]) -> list[int]:
        return gf_trim(list(a))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.f

    def one(self) -> tuple[int, ...]:
        return self.from_int(1)

    def gen(self) -> tuple[int, ...]:
        if self.f == 1:
            return ((-self.modulus[0]) % self.p,)
        return self._pack([0, 1])

    def from_int(self, n: int) -> tuple[int, ...]:
        return (n % self.p,) + (0,) * (self.f - 1)

    def is_zero(self, a) -> bool:
        return not any(a)

    def is_one(self, a) -> bool:
        return a == self.one()

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        if self.f == 1:
            return (a[0] * b[0] % self.p,)
        return self._pack(gf_mulmod(self._unpack(a), self._unpack(b), self._mod, self.p))

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.f == 1:
            return (pow(a[0], self.p - 2, self.p),)
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one()
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def pth_root(self, a):
        return self.pow(a, self.q // self.p)

    def elements(self) -> Iterator[tuple[int, ...]]:
        for tup in itertools.product(range(self.p), repeat=self.f):
            yield tuple(reversed(tup))

    def to_list(self, a) -> list[int]:
        return list(a)

    def format(self, a) -> str:
        if self.f == 1:
            return str(a[0])
        terms = []
        for i, c in enumerate(a):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                if not mono:
                    terms.append(str(c))
                elif c == 1:
                    terms.append(mono)
                else:
                    terms.append(f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    def embedding_into(self, other: "FqField") -> "Embedding":
        """A field embedding self -> other (the least root of the modulus)."""
        if other.p != self.p or other.f % self.f:
            raise ValueError("no embedding between these fields")
        if self.f == 1:
            return Embedding(self, other, other.one())
        poly = ResPoly(other, [other.from_int(c) for c in self.modulus])
        roots = sorted(roots_in_field(poly))
        return Embedding(self, other, roots[0])

    def element_from_coeffs(self, coeffs: Sequence[int]):
        return self._pack(gf_divmod(gf_trim([c % self.p for c in coeffs]), self._mod, self.p)[1])


class Embedding:
    """Field map F_{p^a} -> F_{p^b} determined by the image of the generator."""

    def __init__(self, source: FqField, target: FqField, image):
        self.source = source
        self.target = target
        self.image = image
        powers = [target.one()]
        for _ in range(1, source.f):
            powers.append(target.mul(powers[-1], image))
        self._powers = powers

    def __call__(self, a):
        t = self.target
        out = t.zero()
        for c, pw in zip(a, self._powers):
            if c:
                out = t.add(out, t.mul(t.from_int(c), pw))
        return out

    def compose(self, other: "Embedding") -> "Embedding":
        """``other`` after ``self``."""
        return Embedding(self.source, other.target, other(self.image))


class RationalResidueField:
    """The residue field Q of Laurent series over Q."""

    p = 0
    f = 1
    characteristic = 0
    q = None

    def __repr__(self) -> str:
        return "RationalResidueField()"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalResidueField)

    def __hash__(self) -> int:
        return hash("QQ-residue")

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n: int):
        return Fraction(n)

    def is_zero(self, a) -> bool:
        return a == 0

    def is_one(self, a) -> bool:
        return a == 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def pow(self, a, e: int):
        return Fraction(a) ** e

    def format(self, a) -> str:
        return str(a)


QQ_RESIDUE = RationalResidueField()


# ----------------------------------------------------------------------------
# polynomials over a residue field
# ----------------------------------------------------------------------------

class ResPoly:
    """Dense polynomial over a residue field, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: Iterable):
        cs = list(coeffs)
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # -- basics -------------------------------------------------------------
    @classmethod
    def from_ints(cls, field, ints: Iterable[int]) -> "ResPoly":
        return cls(field, [field.from_int(c) for c in ints])

    @classmethod
    def x(cls, field) -> "ResPoly":
        return cls(field, [field.zero(), field.one()])

    @classmethod
    def const(cls, field, c) -> "ResPoly":
        return cls(field, [c])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, ResPoly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"ResPoly({self})"

    def __str__(self) -> str:
        F = self.field
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if F.is_zero(c):
                continue
            cs = F.format(c)
            if "+" in cs and i > 0:
                cs = f"({cs})"
            mono = "" if i == 0 else ("y" if i == 1 else f"y^{i}")
            if not mono:
                terms.append(cs)
            elif F.is_one(c):
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms)

    def _coerce(self, other) -> "ResPoly":
        if isinstance(other, ResPoly):
            return other
        if isinstance(other, int):
            return ResPoly(self.field, [self.field.from_int(other)])
        return ResPoly(self.field, [other])

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        z = F.zero()
        return ResPoly(F, [F.add(a[i] if i < len(a) else z, b[i] if i < len(b) else z) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return ResPoly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ResPoly(F, [])
        if isinstance(F, FqField) and F.f == 1:
            p = F.p
            prod = gf_mul([c[0] for c in a], [c[0] for c in b], p)
            return ResPoly(F, [(c,) for c in prod])
        out = [F.zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if F.is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return ResPoly(F, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = ResPoly(self.field, [self.field.one()])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "ResPoly":
        F = self.field
        return ResPoly(F, [F.mul(c, x) for x in self.coeffs])

    def monic(self) -> "ResPoly":
        if not self.coeffs:
            return self
        return self.scale(self.field.inv(self.lc()))

    def __divmod__(self, other):
        other = self._coerce(other)
        F = self.field
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        if isinstance(F, FqField) and F.f == 1:
            p = F.p
            q, r = gf_divmod([c[0] for c in self.coeffs], [c[0] for c in other.coeffs], p)
            return ResPoly(F, [(c,) for c in q]), ResPoly(F, [(c,) for c in r])
        r = list(self.coeffs)
        db = other.degree()
        inv = F.inv(other.lc())
        if len(r) <= db:
            return ResPoly(F, []), ResPoly(F, r)
        q = [F.zero()] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db]
            if F.is_zero(c):
                continue
            c = F.mul(c, inv)
            q[k] = c
            for j, bj in enumerate(other.coeffs):
                r[k + j] = F.sub(r[k + j], F.mul(c, bj))
        return ResPoly(F, q), ResPoly(F, r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "ResPoly":
        F = self.field
        return ResPoly(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, a):
        F = self.field
        out = F.zero()
        for c in reversed(self.coeffs):
            out = F.add(F.mul(out, a), c)
        return out

    def map_coeffs(self, fn, field) -> "ResPoly":
        return ResPoly(field, [fn(c) for c in self.coeffs])


def rp_gcd(a: ResPoly, b: ResPoly) -> ResPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def rp_powmod(a: ResPoly, e: int, m: ResPoly) -> ResPoly:
    result = ResPoly(a.field, [a.field.one()])
    base = a % m
    while e:
        if e & 1:
            result = (result * base) % m
        e >>= 1
        if e:
            base = (base * base) % m
    return result


# ----------------------------------------------------------------------------
# factorisation over F_q
# ----------------------------------------------------------------------------

def _pth_root_poly(g: ResPoly) -> ResPoly:
    F = g.field
    p = F.p
    return ResPoly(F, [F.pth_root(g.coeffs[i]) for i in range(0, len(g.coeffs), p)])


def squarefree_decomposition(g: ResPoly) -> list[tuple[ResPoly, int]]:
    """Monic square-free factors with multiplicities (char p aware)."""
    F = g.field
    g = g.monic()
    if g.degree() < 1:
        return []
    out: list[tuple[ResPoly, int]] = []
    c = rp_gcd(g, g.derivative())
    w = g // c
    i = 1
    while w.degree() > 0:
        y = rp_gcd(w, c)
        fac = w // y
        if fac.degree() > 0:
            out.append((fac.monic(), i))
        w = y
        c = c // y
        i += 1
    if c.degree() > 0:
        p = F.characteristic
        for h, e in squarefree_decomposition(_pth_root_poly(c)):
            out.append((h, e * p))
    return out


def _distinct_degree(g: ResPoly) -> list[tuple[ResPoly, int]]:
    F = g.field
    x = ResPoly.x(F)
    out = []
    h = x % g
    i = 1
    while g.degree() >= 2 * i:
        h = rp_powmod(h, F.q, g)
        d = rp_gcd(g, h - x)
        if d.degree() > 0:
            out.append((d, i))
            g = g // d
            h = h % g
        i += 1
    if g.degree() > 0:
        out.append((g.monic(), g.degree()))
    return out


def _equal_degree(g: ResPoly, d: int, rng: random.Random) -> list[ResPoly]:
    F = g.field
    n = g.degree()
    if n == d:
        return [g.monic()]
    while True:
        a = ResPoly(F, [tuple(rng.randrange(F.p) for _ in range(F.f)) for _ in range(n)])
        if a.degree() < 1:
            continue
        if F.p == 2:
            k = F.f * d
            t = a
            s = a
            for _ in range(k - 1):
                t = (t * t) % g
                s = s + t
            b = s
        else:
            b = rp_powmod(a, (F.q ** d - 1) // 2, g) - 1
        h = rp_gcd(g, b)
        if 0 < h.degree() < n:
            return _equal_degree(h, d, rng) + _equal_degree(g // h, d, rng)


def _sort_key(poly: ResPoly):
    return (poly.degree(), tuple(reversed(poly.coeffs)))


def factor(g: ResPoly) -> list[tuple[ResPoly, int]]:
    """Monic irreducible factors with multiplicities, deterministic order.

    The product of ``lc(g)`` and the factors (with multiplicity) equals ``g``.
    """
    if g.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    F = g.field
    if isinstance(F, RationalResidueField):
        return _factor_rational(g)
    rng = random.Random(0x5EED)
    counts: dict[tuple, tuple[ResPoly, int]] = {}
    for sq, mult in squarefree_decomposition(g):
        for block, d in _distinct_degree(sq):
            for irr in _equal_degree(block, d, rng):
                key = irr.coeffs
                prev = counts.get(key)
                counts[key] = (irr, mult + (prev[1] if prev else 0))
    return sorted(counts.values(), key=lambda t: _sort_key(t[0]))


def factor_bruteforce(g: ResPoly) -> list[tuple[ResPoly, int]]:
    """Trial division by all monic polynomials; an oracle for small fields."""
    F = g.field
    g = g.monic()
    out = []
    d = 1
    while g.degree() >= 2 * d or (g.degree() >= d and d == g.degree()):
        found = False
        for tail in itertools.product(list(F.elements()), repeat=d):
            cand = ResPoly(F, list(tail) + [F.one()])
            mult = 0
            while g.degree() >= d and (g % cand).is_zero():
                g = g // cand
                mult += 1
            if mult:
                out.append((cand, mult))
                found = True
        if g.degree() < 1:
            break
        if not found or g.degree() < 2 * (d + 1):
            if g.degree() < 2 * (d + 1):
                out.append((g, 1))
                g = ResPoly(F, [F.one()])
                break
        d += 1
    merged: dict[tuple, tuple[ResPoly, int]] = {}
    for h, m in out:
        if h.degree() < 1:
            continue
        prev = merged.get(h.coeffs)
        merged[h.coeffs] = (h, m + (prev[1] if prev else 0))
    return sorted(merged.values(), key=lambda t: _sort_key(t[0]))


def is_irreducible(g: ResPoly) -> bool:
    fs = factor(g)
    return len(fs) == 1 and fs[0][1] == 1


def roots_in_field(g: ResPoly) -> list:
    """Distinct roots of ``g`` lying in its coefficient field."""
    F = g.field
    out = []
    for h, _ in factor(g):
        if h.degree() == 1:
            out.append(F.neg(h.coeffs[0]))
    return out


def separable_degree(g: ResPoly) -> int:
    """Number of distinct roots of ``g`` in an algebraic closure."""
    if g.degree() < 1:
        raise ValueError("separable degree of a constant")
    return sum(h.degree() for h, _ in factor(g))


def p_free_part(n: int, p: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    if p <= 1:
        return n
    while n % p == 0:
        n //= p
    return n


# ----------------------------------------------------------------------------
# factorisation over Q (degree at most 4)
# ----------------------------------------------------------------------------

def _rational_sqrt(x: Fraction) -> Fraction | None:
    from math import isqrt

    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.extend({d, n // d})
        d += 1
    return sorted(out)


def _rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    from math import lcm

    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    while ints and ints[0] == 0:
        ints.pop(0)
    roots = set()
    if len(ints) < len(coeffs):
        roots.add(Fraction(0))
    if len(ints) <= 1:
        return sorted(roots)
    a0, an = ints[0], ints[-1]
    for num in _divisors(a0):
        for dd in _divisors(an):
            for s in (1, -1):
                r = Fraction(s * num, dd)
                if sum(c * r ** i for i, c in enumerate(ints)) == 0:
                    roots.add(r)
    return sorted(roots)


def _factor_rational(g: ResPoly) -> list[tuple[ResPoly, int]]:
    F = g.field
    if g.degree() > 4:
        raise DegreeTooLargeOverQ(f"degree {g.degree()} > 4 over Q", {"degree": g.degree()})
    g = g.monic()
    out: dict[tuple, tuple[ResPoly, int]] = {}

    def add(h: ResPoly):
        prev = out.get(h.coeffs)
        out[h.coeffs] = (h, 1 + (prev[1] if prev else 0))

    changed = True
    while changed and g.degree() > 0:
        changed = False
        for r in _rational_roots(list(g.coeffs)):
            lin = ResPoly(F, [-r, Fraction(1)])
            if (g % lin).is_zero():
                g = g // lin
                add(lin)
                changed = True
                break
    if g.degree() == 4:
        quad = _split_quartic(g)
        if quad is not None:
            h1, h2 = quad
            add(h1)
            add(h2)
            g = ResPoly(F, [Fraction(1)])
    if g.degree() > 0:
        add(g)
    return sorted(out.values(), key=lambda t: _sort_key(t[0]))


def _split_quartic(g: ResPoly):
    """Split a monic quartic without rational roots into two rational quadratics."""
    F = g.field
    c0, c1, c2, c3, _ = [Fraction(c) for c in g.coeffs]
    shift = c3 / 4
    # depressed quartic y^4 + P y^2 + Q y + R with x = y - shift
    P = c2 - 6 * shift ** 2
    Q = c1 - 2 * c2 * shift + 8 * shift ** 3
    R = c0 - c1 * shift + c2 * shift ** 2 - 3 * shift ** 4
    candidates = []
    if Q != 0:
        for K in _rational_roots([-Q * Q, P * P - 4 * R, 2 * P, Fraction(1)]):
            k = _rational_sqrt(K)
            if k:
                ssum = P + K
                sdiff = Q / k
                candidates.append((k, (ssum - sdiff) / 2, (ssum + sdiff) / 2))
    else:
        disc = _rational_sqrt(P * P - 4 * R)
        if disc is not None:
            candidates.append((Fraction(0), (P - disc) / 2, (P + disc) / 2))
        for l in filter(None, {_rational_sqrt(R), -(_rational_sqrt(R) or 0)}):
            k = _rational_sqrt(2 * l - P)
            if k:
                candidates.append((k, l, l))
    for k, l, m in candidates:
        h1 = ResPoly(F, [l, k, Fraction(1)])
        h2 = ResPoly(F, [m, -k, Fraction(1)])
        # undo the shift y = x + shift
        h1 = ResPoly(F, [l + k * shift + shift ** 2, k + 2 * shift, Fraction(1)])
        h2 = ResPoly(F, [m - k * shift + shift ** 2, -k + 2 * shift, Fraction(1)])
        if h1 * h2 == g:
            return tuple(sorted((h1, h2), key=_sort_key))
    return None
