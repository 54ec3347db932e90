"""Exact scalar rings: ZZ, QQ, GF(p), Laurent polynomials over a field, group rings.

Ring objects are small descriptors; elements are plain Python values (int,
Fraction) or the immutable classes below.  Every element type accepts Python
ints on either side of + - * and compares equal to ints where that makes sense,
so numpy object arrays of them behave.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import UnsupportedRing


class Ring:
    name = "?"
    is_field = False
    is_euclidean = False
    commutative = True

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def unit_inverse(self, a):
        raise NotImplementedError

    def norm(self, a) -> int:
        raise UnsupportedRing(f"{self.name} is not Euclidean")

    def divmod(self, a, b):
        raise UnsupportedRing(f"{self.name} is not Euclidean")

    def normalize(self, a):
        """Return (n, u) with u a unit and n = u*a the canonical associate of a."""
        return a, self.one

    def render(self, a) -> str:
        return str(a)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(self) is type(other) and self.key() == other.key()

    def __hash__(self):
        return hash((type(self).__name__, self.key()))

    def key(self):
        return self.name


class IntegerRing(Ring):
    name = "ZZ"
    is_euclidean = True

    def coerce(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x.numerator)
        raise TypeError(f"cannot coerce {x!r} into ZZ")

    def is_unit(self, a):
        return a in (1, -1)

    def unit_inverse(self, a):
        return a

    def norm(self, a):
        return abs(a)

    def divmod(self, a, b):
        return divmod(a, b)

    def normalize(self, a):
        return (-a, -1) if a < 0 else (a, 1)

    def parse(self, text: str):
        return int(text)


class RationalField(Ring):
    name = "QQ"
    is_field = True
    is_euclidean = True

    def coerce(self, x):
        if isinstance(x, Fp):
            raise TypeError("cannot coerce a prime-field element into QQ")
        return Fraction(x)

    def is_unit(self, a):
        return a != 0

    def unit_inverse(self, a):
        return 1 / Fraction(a)

    def norm(self, a):
        return 0 if a == 0 else 1

    def divmod(self, a, b):
        return Fraction(a) / b, Fraction(0)

    def normalize(self, a):
        if a == 0:
            return Fraction(0), Fraction(1)
        return Fraction(1), 1 / Fraction(a)

    def render(self, a):
        return str(Fraction(a))

    def parse(self, text: str):
        return Fraction(text)


class Fp:
    """Element of the prime field GF(p)."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0 in GF(%d)" % self.p)
        return Fp(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(o, self.p) * self.inverse()

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)

    def __reduce__(self):
        return (Fp, (self.v, self.p))


class PrimeField(Ring):
    is_field = True
    is_euclidean = True

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"

    def key(self):
        return self.p

    def coerce(self, x):
        if isinstance(x, Fp):
            return x
        if isinstance(x, Fraction):
            return Fp(x.numerator, self.p) / Fp(x.denominator, self.p)
        return Fp(int(x), self.p)

    def is_unit(self, a):
        return a != 0

    def unit_inverse(self, a):
        return self.coerce(a).inverse()

    def norm(self, a):
        return 0 if a == 0 else 1

    def divmod(self, a, b):
        return self.coerce(a) / b, self.zero

    def normalize(self, a):
        a = self.coerce(a)
        if a == 0:
            return a, self.one
        return self.one, a.inverse()

    def parse(self, text: str):
        return self.coerce(Fraction(text))


ZZ = IntegerRing()
QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def scalar_ring(name: str) -> Ring:
    """Look up 'ZZ', 'QQ' or 'GF(p)'."""
    name = name.strip()
    if name == "ZZ":
        return ZZ
    if name == "QQ":
        return QQ
    if name.startswith("GF(") and name.endswith(")"):
        return GF(int(name[3:-1]))
    raise ValueError(f"unknown scalar ring {name!r}")


# ---------------------------------------------------------------- Laurent

class Laurent:
    """Laurent polynomial over a field.  `terms` is a sorted tuple of (exponent, coef)."""

    __slots__ = ("terms", "field", "var")

    def __init__(self, coeffs, field: Ring, var: str = "t"):
        if isinstance(coeffs, dict):
            items = coeffs.items()
        else:
            items = coeffs
        acc: dict[int, object] = {}
        for e, c in items:
            acc[e] = acc.get(e, 0) + c
        self.terms = tuple(sorted((e, field.coerce(c)) for e, c in acc.items() if c != 0))
        self.field = field
        self.var = var

    def _wrap(self, other):
        if isinstance(other, Laurent):
            return other
        if isinstance(other, (int, Fraction, Fp)):
            return Laurent({0: other}, self.field, self.var)
        return NotImplemented

    def __add__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        d = dict(self.terms)
        for e, c in o.terms:
            d[e] = d.get(e, 0) + c
        return Laurent(d, self.field, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -c for e, c in self.terms}, self.field, self.var)

    def __sub__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else o + (-self)

    def __mul__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        d: dict[int, object] = {}
        for e1, c1 in self.terms:
            for e2, c2 in o.terms:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return Laurent(d, self.field, self.var)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return False
        return self.terms == o.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    @property
    def low(self):
        return self.terms[0][0]

    @property
    def high(self):
        return self.terms[-1][0]

    def span(self) -> int:
        return self.high - self.low

    def shift(self, k: int) -> "Laurent":
        return Laurent({e + k: c for e, c in self.terms}, self.field, self.var)

    def coefficient(self, e):
        return dict(self.terms).get(e, self.field.zero)

    def __repr__(self):
        return render_laurent(self)

    def __reduce__(self):
        return (Laurent, (self.terms, self.field, self.var))


def render_laurent(f: Laurent) -> str:
    if not f.terms:
        return "0"
    parts = []
    for e, c in f.terms:
        mono = "" if e == 0 else (f.var if e == 1 else f"{f.var}^{e}")
        parts.append((c, mono))
    return render_terms(parts)


def render_terms(parts) -> str:
    """Render [(coef, monomial string)] as 'a - 2 b + c'.  Empty monomial means 1."""
    if not parts:
        return "0"
    out = []
    for i, (c, mono) in enumerate(parts):
        c = c if isinstance(c, (int, Fraction)) else c
        neg = _is_negative(c)
        mag = -c if neg else c
        if mono == "":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag} {mono}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _is_negative(c) -> bool:
    if isinstance(c, Fp):
        return False
    try:
        return c < 0
    except TypeError:
        return False


class LaurentRing(Ring):
    """k[t, t^-1] for a field k.  Euclidean with norm = exponent span."""

    is_euclidean = True

    def __init__(self, field: Ring, var: str = "t"):
        if not field.is_field:
            raise UnsupportedRing(f"Laurent polynomials over {field.name} are not supported (need a field)")
        self.field = field
        self.var = var
        self.name = f"{field.name}[{var}^+-1]"

    def key(self):
        return (self.field.key(), self.var)

    def coerce(self, x):
        if isinstance(x, Laurent):
            return x
        return Laurent({0: x}, self.field, self.var)

    def monomial(self, e: int, c=1) -> Laurent:
        return Laurent({e: c}, self.field, self.var)

    def is_unit(self, a):
        return len(a.terms) == 1

    def unit_inverse(self, a):
        (e, c), = a.terms
        return Laurent({-e: self.field.unit_inverse(c)}, self.field, self.var)

    def norm(self, a):
        return a.span() if a.terms else -1

    def divmod(self, a, b):
        a, b = self.coerce(a), self.coerce(b)
        if not b.terms:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not a.terms:
            return self.zero, self.zero
        # shift both to honest polynomials with nonzero constant term
        la, lb = a.low, b.low
        num = dict((e - la, c) for e, c in a.terms)
        den = [(e - lb, c) for e, c in b.terms]
        dmax, dlead = den[-1]
        inv = self.field.unit_inverse(dlead)
        quot: dict[int, object] = {}
        while num:
            top = max(num)
            if top < dmax:
                break
            coef = num[top] * inv
            shift = top - dmax
            quot[shift] = coef
            for e, c in den:
                v = num.get(e + shift, 0) - coef * c
                if v == 0:
                    num.pop(e + shift, None)
                else:
                    num[e + shift] = v
        q = Laurent(quot, self.field, self.var).shift(la - lb)
        r = Laurent(num, self.field, self.var).shift(la)
        return q, r

    def reduce_mod(self, a, f):
        """Canonical representative of a modulo f, with exponents in [0, span f)."""
        a, f = self.coerce(a), self.coerce(f)
        f = f.shift(-f.low)
        d = f.high
        if d == 0:
            return self.zero
        lead, const = f.coefficient(d), f.coefficient(0)
        while a.terms and a.high >= d:
            e, c = a.terms[-1]
            a = a - f.shift(e - d) * (c * self.field.unit_inverse(lead))
        while a.terms and a.low < 0:
            e, c = a.terms[0]
            a = a - f.shift(e) * (c * self.field.unit_inverse(const))
        return a

    def normalize(self, a):
        a = self.coerce(a)
        if not a.terms:
            return a, self.one
        e, c = a.terms[0]
        u = Laurent({-e: self.field.unit_inverse(c)}, self.field, self.var)
        return u * a, u

    def render(self, a):
        return render_laurent(self.coerce(a))
