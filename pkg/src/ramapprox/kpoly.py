"""Dense univariate polynomials over a valued field.

A :class:`KPoly` stores coefficients lowest degree first over a coefficient
field (a base field or an :class:`~ramapprox.maclane.ExtField`).  Besides ring
arithmetic the module provides resultants, phi-adic expansions, Newton
polygons and a small expression parser used by the command line.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .base_field import INF, fmt_val
from .errors import DivisionByZeroPoly, ParseError


class KPoly:
    __slots__ = ("field", "c", "_hash")

    def __init__(self, field, coeffs: Iterable = (), *, _trusted: bool = False):
        self.field = field
        if _trusted:
            cs = list(coeffs)
        else:
            cs = [field.coerce(x) for x in coeffs]
        zero = field.zero()
        while cs and cs[-1] == zero:
            cs.pop()
        self.c = tuple(cs)
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def z(cls, field) -> "KPoly":
        return cls(field, [field.zero(), field.one()], _trusted=True)

    @classmethod
    def const(cls, field, a) -> "KPoly":
        return cls(field, [a])

    @classmethod
    def monomial(cls, field, n: int, a=None) -> "KPoly":
        a = field.one() if a is None else field.coerce(a)
        return cls(field, [field.zero()] * n + [a], _trusted=True)

    def _make(self, coeffs) -> "KPoly":
        return KPoly(self.field, coeffs, _trusted=True)

    # -- basic data ---------------------------------------------------------
    def degree(self) -> int:
        return len(self.c) - 1

    def __len__(self) -> int:
        return len(self.c)

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def lc(self):
        return self.c[-1] if self.c else self.field.zero()

    def coeff(self, i: int):
        return self.c[i] if 0 <= i < len(self.c) else self.field.zero()

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == self.field.one()

    def __eq__(self, other) -> bool:
        if isinstance(other, KPoly):
            return self.c == other.c
        if isinstance(other, int):
            return self.c == KPoly(self.field, [other]).c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.c)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.c)

    def __repr__(self) -> str:
        return f"KPoly({self})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "KPoly":
        if isinstance(other, KPoly):
            return other
        return KPoly(self.field, [other])

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return self._make(out)

    __radd__ = __add__

    def __neg__(self):
        return self._make([-x for x in self.c])

    def __sub__(self, other):
        other = self._coerce(other)
        a, b = self.c, other.c
        n = max(len(a), len(b))
        zero = self.field.zero()
        return self._make([(a[i] if i < len(a) else zero) - (b[i] if i < len(b) else zero) for i in range(n)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, KPoly):
            other = self.field.coerce(other)
            if other == self.field.zero():
                return self._make([])
            return self._make([x * other for x in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return self._make([])
        if len(a) == 1:
            x = a[0]
            return self._make([x * y for y in b])
        if len(b) == 1:
            y = b[0]
            return self._make([x * y for x in a])
        zero = self.field.zero()
        out = [zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == zero:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return self._make(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = self._make([self.field.one()])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale_by(self, a) -> "KPoly":
        return self * a

    def __truediv__(self, a):
        if isinstance(a, KPoly):
            if a.degree() != 0:
                raise TypeError("use divmod for polynomial division")
            a = a.c[0]
        a = self.field.coerce(a)
        if a == self.field.zero():
            raise DivisionByZeroPoly("division by zero")
        inv = self.field.one() / a
        return self._make([x * inv for x in self.c])

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.c:
            raise DivisionByZeroPoly("division by the zero polynomial", {})
        r = list(self.c)
        b = other.c
        db = len(b) - 1
        if len(r) <= db:
            return self._make([]), self._make(r)
        one = self.field.one()
        lc = b[-1]
        inv = one if lc == one else one / lc
        zero = self.field.zero()
        q = [zero] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db]
            if c == zero:
                continue
            if inv is not one:
                c = c * inv
            q[k] = c
            for j in range(db):
                bj = b[j]
                if bj != zero:
                    r[k + j] = r[k + j] - c * bj
        return self._make(q), self._make(r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "KPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "KPoly":
        if not self.c:
            return self
        return self / self.c[-1]

    def derivative(self) -> "KPoly":
        return self._make([x * i for i, x in enumerate(self.c)][1:])

    def hasse_derivative(self, k: int) -> "KPoly":
        """The k-th Hasse derivative (valid in every characteristic)."""
        from math import comb

        return self._make([self.c[i] * comb(i, k) for i in range(k, len(self.c))])

    def __call__(self, a):
        """Evaluate at a field element or compose with a polynomial."""
        if isinstance(a, KPoly):
            out = self._make([])
            for x in reversed(self.c):
                out = out * a + x
            return out
        a = self.field.coerce(a)
        out = self.field.zero()
        for x in reversed(self.c):
            out = out * a + x
        return out

    def translate(self, a) -> "KPoly":
        """f(z + a) by Horner/Taylor shifts."""
        a = self.field.coerce(a)
        c = list(self.c)
        n = len(c)
        if a == self.field.zero():
            return self
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] = c[j] + a * c[j + 1]
        return self._make(c)

    def scale(self, u) -> "KPoly":
        """f(u z)."""
        u = self.field.coerce(u)
        out = []
        w = self.field.one()
        for x in self.c:
            out.append(x * w)
            w = w * u
        return self._make(out)

    def reverse(self, n: int | None = None) -> "KPoly":
        n = self.degree() if n is None else n
        cs = list(self.c) + [self.field.zero()] * (n + 1 - len(self.c))
        return self._make(list(reversed(cs[: n + 1])))

    def map_coeffs(self, fn: Callable, field) -> "KPoly":
        return KPoly(field, [fn(x) for x in self.c])

    def content_valuation(self):
        v = self.field.valuation
        return min((v(x) for x in self.c), default=INF)


# ----------------------------------------------------------------------------
# gcd, resultants
# ----------------------------------------------------------------------------

def poly_gcd(a: KPoly, b: KPoly) -> KPoly:
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: KPoly, b: KPoly):
    """Return (g, s, t) with s*a + t*b = g monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = KPoly(F, [F.one()], _trusted=True), KPoly(F, [], _trusted=True)
    t0, t1 = KPoly(F, [], _trusted=True), KPoly(F, [F.one()], _trusted=True)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = F.one() / r0.lc()
    return r0 * inv, s0 * inv, t0 * inv


def poly_invmod(a: KPoly, m: KPoly) -> KPoly:
    g, s, _ = poly_xgcd(a % m, m)
    if g.degree() != 0:
        raise ZeroDivisionError("polynomial not invertible modulo m")
    return s % m


def resultant(f: KPoly, g: KPoly):
    """Res(f, g) by the Euclidean remainder sequence over the coefficient field."""
    F = f.field
    if f.is_zero() or g.is_zero():
        return F.zero()
    sign = 1
    acc = F.one()
    a, b = f, g
    while True:
        m, n = a.degree(), b.degree()
        if n == 0:
            return acc * sign * (b.c[0] ** m) if m else acc * sign
        if m == 0:
            return acc * sign * (a.c[0] ** n)
        r = a % b
        # Res(a, b) = (-1)^{mn} Res(b, a) = (-1)^{mn} lc(b)^{m - deg r} Res(b, r)
        if (m * n) % 2:
            sign = -sign
        if r.is_zero():
            return F.zero()
        acc = acc * b.lc() ** (m - r.degree())
        a, b = b, r


def discriminant(f: KPoly):
    n = f.degree()
    r = resultant(f, f.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return r * sign / f.lc()


# ----------------------------------------------------------------------------
# phi-adic expansion and Newton polygons
# ----------------------------------------------------------------------------

def phi_expansion(f: KPoly, phi: KPoly) -> list[KPoly]:
    """Coefficients c_m (deg c_m < deg phi) with f = sum c_m phi^m."""
    if phi.degree() < 1:
        raise ValueError("phi must be nonconstant")
    out = []
    q = f
    while q:
        q, r = divmod(q, phi)
        out.append(r)
    return out or [f._make([])]


def from_expansion(coeffs: Sequence[KPoly], phi: KPoly) -> KPoly:
    out = phi._make([])
    for c in reversed(coeffs):
        out = out * phi + c
    return out


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull; slopes increase from left to right."""

    vertices: tuple
    segments: tuple  # (slope, length)
    z_multiplicity: int = 0

    def slopes(self) -> list:
        return [s for s, _ in self.segments]

    def root_valuations(self) -> list:
        """Negated slopes with multiplicity (finite part only)."""
        out = []
        for s, n in self.segments:
            out.extend([-s] * n)
        return out

    def to_json(self) -> dict:
        return {
            "vertices": [[i, fmt_val(v)] for i, v in self.vertices],
            "segments": [{"slope": fmt_val(s), "length": n} for s, n in self.segments],
            "z_multiplicity": self.z_multiplicity,
        }


def newton_polygon_points(points: Iterable[tuple[int, object]]) -> NewtonPolygon:
    pts = sorted((i, Fraction(v)) for i, v in points if v is not INF)
    if not pts:
        raise ValueError("Newton polygon of the zero polynomial")
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append((Fraction(y2 - y1, 1) / (x2 - x1), x2 - x1))
    return NewtonPolygon(tuple(hull), tuple(segs), pts[0][0])


def newton_polygon(f: KPoly, valuation: Callable | None = None) -> NewtonPolygon:
    """Newton polygon of ``f`` under ``valuation`` (default: the field's)."""
    v = valuation or f.field.valuation
    if f.is_zero():
        raise ValueError("Newton polygon of the zero polynomial")
    return newton_polygon_points((i, v(c)) for i, c in enumerate(f.c) if c != f.field.zero())


# ----------------------------------------------------------------------------
# parsing and printing
# ----------------------------------------------------------------------------

def format_poly(f: KPoly, var: str = "z") -> str:
    if not f.c:
        return "0"
    F = f.field
    terms = []
    for i in range(len(f.c) - 1, -1, -1):
        x = f.c[i]
        if x == F.zero():
            continue
        s = F.format(x)
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(s)
            continue
        if s == "1":
            terms.append(mono)
        elif s == "-1":
            terms.append("-" + mono)
        else:
            if any(ch in s[1:] for ch in "+-/") or s.startswith("("):
                s = f"({s})"
            terms.append(f"{s}*{mono}")
    return "+".join(terms).replace("+-", "-")


def _symbols(field, var: str):
    base = field.base_field() if hasattr(field, "base_field") else field
    syms = {var: KPoly.z(field)}
    if hasattr(base, "t"):
        syms["t"] = KPoly(field, [field.coerce(base.t)])
    syms["pi"] = KPoly(field, [field.coerce(base.uniformizer())])
    syms["p"] = syms["pi"]
    return syms


def parse_poly(text, field, var: str = "z") -> KPoly:
    """Parse an expression string such as ``z^4+20*z^2+292`` or a coefficient
    list ``[c0, c1, ...]`` (each entry itself an expression in t / p)."""
    if isinstance(text, KPoly):
        return text
    if isinstance(text, (list, tuple)):
        return KPoly(field, [parse_scalar(str(x), field) for x in text])
    s = str(text).strip()
    if s.startswith("[") and s.endswith("]"):
        inner = s[1:-1].strip()
        parts = [x for x in _split_top(inner)] if inner else []
        return KPoly(field, [parse_scalar(x, field) for x in parts])
    return _eval_expr(s, field, var)


def parse_scalar(text: str, field):
    f = _eval_expr(str(text), field, var="\0")
    if f.degree() > 0:
        raise ParseError(f"expected a constant, got {text!r}")
    return f.coeff(0)


def _split_top(s: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return out


def _eval_expr(s: str, field, var: str) -> KPoly:
    syms = _symbols(field, var)
    try:
        tree = ast.parse(s.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {s!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return KPoly(field, [node.value])
        if isinstance(node, ast.Name):
            if node.id not in syms:
                raise ParseError(f"unknown symbol {node.id!r}")
            return syms[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            x = ev(node.operand)
            return -x if isinstance(node.op, ast.USub) else x
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if b.degree() != 0:
                    raise ParseError("division by a non-constant")
                return a / b.c[0]
            if isinstance(node.op, ast.Pow):
                if b.degree() > 0 or not isinstance(node.right, (ast.Constant, ast.UnaryOp)):
                    raise ParseError("exponents must be integer literals")
                e = _literal_int(node.right)
                if e < 0:
                    if a.degree() != 0:
                        raise ParseError("negative power of a non-constant")
                    return KPoly(field, [field.one() / a.c[0] ** (-e)])
                return a ** e
        raise ParseError(f"unsupported syntax in {s!r}")

    try:
        return ev(tree)
    except ZeroDivisionError as exc:
        raise ParseError(f"division by zero in {s!r}") from exc


def _literal_int(node) -> int:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_literal_int(node.operand)
    raise ParseError("exponents must be integer literals")


def poly_to_json(f: KPoly) -> list[str]:
    return [f.field.format(x) for x in f.c]
