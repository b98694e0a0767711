"""Exact base fields with a discrete valuation.

Three kinds of base field are supported, each modelled by a dense subfield of
its completion:

* ``qp:<p>``  rationals with the p-adic valuation (residue field F_p);
* ``fpt:<p>`` rational functions F_p(t) with ord_t (residue field F_p);
* ``qt``      rational functions Q(t) with ord_t (residue field Q).

Valuations are :class:`fractions.Fraction` values or :data:`INF`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering

from .errors import NegativeValuation, ParseError
from .kernels import gf_add, gf_divmod, gf_gcd, gf_mul, gf_sub, gf_trim
from .residue_poly import QQ_RESIDUE, FqField


# ----------------------------------------------------------------------------
# valuation values
# ----------------------------------------------------------------------------

@total_ordering
class _Infinity:
    """The value +infinity; larger than every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    __str__ = __repr__

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("+inf")

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __le__(self, other) -> bool:
        return other is self

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other == 0:
            raise ValueError("0 * infinity")
        if other < 0:
            raise ValueError("negative multiple of infinity")
        return self

    __rmul__ = __mul__

    def __truediv__(self, other):
        if other <= 0:
            raise ValueError("infinity divided by a non-positive number")
        return self

    def __sub__(self, other):
        if other is self:
            raise ValueError("inf - inf")
        return self


INF = _Infinity()


def is_inf(v) -> bool:
    return v is INF


def val(x) -> Fraction | _Infinity:
    """Coerce ``x`` (int, Fraction, "a/b" or "inf") to a valuation value."""
    if x is INF:
        return INF
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "oo", "infinity"):
            return INF
        try:
            return Fraction(s)
        except ValueError as exc:
            raise ParseError(f"bad value {x!r}") from exc
    return Fraction(x)


def fmt_val(v) -> str:
    if v is INF:
        return "inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def ord_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("ord of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


# ----------------------------------------------------------------------------
# rational functions
# ----------------------------------------------------------------------------

def _q_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _q_divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) <= db:
        return [], _q_trim(r)
    inv = 1 / Fraction(b[-1])
    q = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db]
        if c:
            c = c * inv
            q[k] = c
            for j in range(db + 1):
                r[k + j] -= c * b[j]
    return _q_trim(q), _q_trim(r[:db])


def _q_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _q_trim(out)


def _q_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _q_trim(out)


def _q_sub(a, b):
    return _q_add(a, [-x for x in b])


def _q_gcd(a, b):
    while b:
        a, b = b, _q_divmod(a, b)[1]
    if not a:
        return []
    lc = a[-1]
    return [x / lc for x in a]


class _PolyOps:
    """Coefficient arithmetic for the numerator/denominator polynomials."""

    def __init__(self, p: int):
        self.p = p

    def norm(self, a):
        if self.p:
            return gf_trim([int(x) % self.p for x in a])
        return _q_trim([Fraction(x) for x in a])

    def add(self, a, b):
        return gf_add(a, b, self.p) if self.p else _q_add(a, b)

    def sub(self, a, b):
        return gf_sub(a, b, self.p) if self.p else _q_sub(a, b)

    def mul(self, a, b):
        return gf_mul(a, b, self.p) if self.p else _q_mul(a, b)

    def divmod(self, a, b):
        return gf_divmod(a, b, self.p) if self.p else _q_divmod(a, b)

    def gcd(self, a, b):
        return gf_gcd(a, b, self.p) if self.p else _q_gcd(a, b)

    def scale(self, a, c):
        if self.p:
            return gf_trim([x * c % self.p for x in a])
        return _q_trim([x * c for x in a])

    def inv(self, c):
        return pow(int(c), self.p - 2, self.p) if self.p else 1 / Fraction(c)


class RatFunc:
    """A rational function num/den in t with den monic and gcd(num, den) = 1."""

    __slots__ = ("ops", "num", "den", "_hash")

    def __init__(self, ops: _PolyOps, num, den=None, *, reduced: bool = False):
        self.ops = ops
        num = ops.norm(num)
        den = [1] if den is None else ops.norm(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            den = ops.norm([1])
        elif not reduced and len(den) > 1:
            g = ops.gcd(num, den)
            if len(g) > 1:
                num = ops.divmod(num, g)[0]
                den = ops.divmod(den, g)[0]
        lc = den[-1]
        if lc != 1:
            inv = ops.inv(lc)
            num = ops.scale(num, inv)
            den = ops.scale(den, inv)
        self.num = tuple(num)
        self.den = tuple(den)
        self._hash = None

    def _new(self, num, den):
        return RatFunc(self.ops, num, den)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            if self.ops.p:
                other = Fraction(other)
                return RatFunc(self.ops, [other.numerator % self.ops.p]).__truediv__(
                    RatFunc(self.ops, [other.denominator % self.ops.p]))
            return RatFunc(self.ops, [Fraction(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        o = self.ops
        if self.den == other.den:
            return self._new(o.add(list(self.num), list(other.num)), list(self.den))
        return self._new(o.add(o.mul(list(self.num), list(other.den)), o.mul(list(other.num), list(self.den))),
                         o.mul(list(self.den), list(other.den)))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.ops, self.ops.scale(list(self.num), -1), list(self.den), reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        o = self.ops
        return self._new(o.mul(list(self.num), list(other.num)), o.mul(list(self.den), list(other.den)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        o = self.ops
        return self._new(o.mul(list(self.num), list(other.den)), o.mul(list(self.den), list(other.num)))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, e: int):
        if e < 0:
            return (1 / self) ** (-e)
        out = self._coerce(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if len(self.den) == 1 and len(self.num) <= 1:
                c = self.num[0] if self.num else 0
                self._hash = hash(Fraction(c)) if not self.ops.p else hash(("fp", c))
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def ord_t(self):
        if not self.num:
            return INF
        i = next(k for k, c in enumerate(self.num) if c)
        j = next(k for k, c in enumerate(self.den) if c)
        return Fraction(i - j)

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        n = _fmt_tpoly(self.num)
        if self.den == (1,) or self.den == (Fraction(1),):
            return n
        d = _fmt_tpoly(self.den)
        if len([c for c in self.num if c]) > 1:
            n = f"({n})"
        return f"{n}/({d})"


def _fmt_tpoly(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        cs = str(c)
        if i == 0:
            terms.append(cs)
            continue
        mono = "t" if i == 1 else f"t^{i}"
        if c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            if "/" in cs:
                cs = f"({cs})"
            terms.append(f"{cs}*{mono}")
    if not terms:
        return "0"
    return "+".join(terms).replace("+-", "-")


# ----------------------------------------------------------------------------
# the fields
# ----------------------------------------------------------------------------

class BaseField:
    """Common interface of the valued fields used as coefficient rings."""

    E = 1
    depth = 0
    spec = ""

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def is_zero(self, x) -> bool:
        return x == self.zero()

    def base_field(self) -> "BaseField":
        return self

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec}>"

    def __eq__(self, other):
        return type(self) is type(other) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def pow_uniformizer(self, k: int):
        return self.uniformizer() ** k

    def format(self, x) -> str:
        return str(x)


class PAdicField(BaseField):
    """Q with the p-adic valuation."""

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.spec = f"qp:{p}"
        self.residue_field = FqField(p, 1)
        self.char = 0
        self.residue_char = p

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into {self.spec}")

    def is_element(self, x) -> bool:
        return isinstance(x, (int, Fraction))

    def valuation(self, x):
        x = Fraction(x)
        if x == 0:
            return INF
        n, d = x.numerator, x.denominator
        k = 0
        p = self.p
        while n % p == 0:
            n //= p
            k += 1
        while d % p == 0:
            d //= p
            k -= 1
        return Fraction(k)

    def uniformizer(self):
        return Fraction(self.p)

    def reduce_unit(self, x):
        v = self.valuation(x)
        if v < 0:
            raise NegativeValuation(f"v({x}) = {v} < 0", {"valuation": fmt_val(v)})
        if v > 0:
            return (0,)
        x = Fraction(x)
        p = self.p
        return (x.numerator * pow(x.denominator, -1, p) % p,)

    def lift(self, r):
        return Fraction(r[0] % self.p)

    def truncate(self, x, N):
        """An element y with v(x - y) >= N and denominator a power of p."""
        x = Fraction(x)
        if x == 0:
            return x
        N = int(-(-Fraction(N) // 1))
        k = int(self.valuation(x))
        if k >= N:
            return Fraction(0)
        p = self.p
        u = x / Fraction(p) ** k
        mod = p ** (N - k)
        r = u.numerator * pow(u.denominator, -1, mod) % mod
        return Fraction(r) * Fraction(p) ** k


class _LaurentBase(BaseField):
    def __init__(self, p: int):
        self._ops = _PolyOps(p)
        self.t = RatFunc(self._ops, [0, 1])

    def from_int(self, n):
        return RatFunc(self._ops, [n])

    def coerce(self, x):
        if isinstance(x, RatFunc):
            if x.ops.p != self._ops.p:
                raise TypeError("rational function over a different field")
            return x
        if isinstance(x, (int, Fraction)):
            return self.from_int(1) * x
        raise TypeError(f"cannot coerce {x!r} into {self.spec}")

    def is_element(self, x) -> bool:
        return isinstance(x, RatFunc) and x.ops.p == self._ops.p

    def valuation(self, x):
        return self.coerce(x).ord_t()

    def uniformizer(self):
        return self.t

    def element(self, num, den=None):
        return RatFunc(self._ops, num, den)

    def truncate(self, x, N):
        """The t-adic expansion of x truncated below t^N."""
        x = self.coerce(x)
        if x.is_zero():
            return x
        N = int(-(-Fraction(N) // 1))
        o = self._ops
        num, den = list(x.num), list(x.den)
        j = next(k for k, c in enumerate(den) if c)
        den = den[j:]
        shift = -j
        i = next(k for k, c in enumerate(num) if c)
        num = num[i:]
        shift += i
        if shift >= N:
            return self.zero()
        terms = N - shift
        inv0 = o.inv(den[0])
        out = []
        rem = list(num) + [0] * max(0, terms - len(num))
        for k in range(terms):
            c = rem[k] * inv0 if rem[k] else 0
            if o.p:
                c = int(c) % o.p
            out.append(c)
            if c:
                for m, d in enumerate(den):
                    if k + m < len(rem):
                        rem[k + m] = rem[k + m] - c * d
        return RatFunc(o, [0] * shift + out) if shift >= 0 else RatFunc(o, out, [0] * (-shift) + [1])

    def _unit_part_constant(self, x):
        x = self.coerce(x)
        v = x.ord_t()
        if v is INF:
            return None, v
        i = next(k for k, c in enumerate(x.num) if c)
        j = next(k for k, c in enumerate(x.den) if c)
        return (x.num[i], x.den[j]), v


class LaurentFF(_LaurentBase):
    """F_p(t) with the t-adic valuation."""

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        super().__init__(p)
        self.p = p
        self.spec = f"fpt:{p}"
        self.residue_field = FqField(p, 1)
        self.char = p
        self.residue_char = p

    def reduce_unit(self, x):
        nd, v = self._unit_part_constant(x)
        if v is not INF and v < 0:
            raise NegativeValuation(f"v({x}) = {v} < 0", {"valuation": fmt_val(v)})
        if v is INF or v > 0:
            return (0,)
        a, b = nd
        return (a * pow(b, -1, self.p) % self.p,)

    def lift(self, r):
        return RatFunc(self._ops, [r[0] % self.p])


class LaurentQ(_LaurentBase):
    """Q(t) with the t-adic valuation; residue characteristic zero."""

    def __init__(self):
        super().__init__(0)
        self.p = 0
        self.spec = "qt"
        self.residue_field = QQ_RESIDUE
        self.char = 0
        self.residue_char = 0

    def reduce_unit(self, x):
        nd, v = self._unit_part_constant(x)
        if v is not INF and v < 0:
            raise NegativeValuation(f"v({x}) = {v} < 0", {"valuation": fmt_val(v)})
        if v is INF or v > 0:
            return Fraction(0)
        a, b = nd
        return Fraction(a) / b

    def lift(self, r):
        return RatFunc(self._ops, [Fraction(r)])


_SPEC = re.compile(r"^\s*(qp|fpt):(\d+)\s*$|^\s*qt\s*$")


def parse_base(spec: str) -> BaseField:
    """Parse ``qp:<p>``, ``fpt:<p>`` or ``qt``."""
    m = _SPEC.match(spec or "")
    if not m:
        raise ParseError(f"unknown base field {spec!r}; expected qp:<p>, fpt:<p> or qt")
    kind, p = m.group(1), m.group(2)
    try:
        if kind == "qp":
            return PAdicField(int(p))
        if kind == "fpt":
            return LaurentFF(int(p))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return LaurentQ()
