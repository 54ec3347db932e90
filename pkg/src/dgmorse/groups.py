"""Groups that may stand in degree 0 of a presented DGA, plus their group rings.

Three families are supported:
  * finite groups given by an explicit multiplication table,
  * free abelian groups Z^n on named generators,
  * Z x| Z with generators a, b and b a b^-1 = a^eps (eps = -1 is the Klein bottle group).

Words are lists of (generator, nonzero exponent).
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction

from .scalars import QQ, ZZ, Fp, Laurent, LaurentRing, Ring, render_terms

SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


class Group:
    kind = "?"
    generators: tuple = ()
    is_finite = False
    is_abelian = False

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def gen(self, name):
        raise NotImplementedError

    def word(self, a) -> list:
        raise NotImplementedError

    def relators(self) -> list:
        raise NotImplementedError

    def render(self, a) -> str:
        raise NotImplementedError

    def sort_key(self, a):
        return a

    def parse_token(self, tok):
        """Group element named by a single token, or None."""
        return None

    def evaluate(self, word):
        g = self.identity
        for name, e in word:
            h = self.gen(name) if e > 0 else self.inv(self.gen(name))
            for _ in range(abs(e)):
                g = self.mul(g, h)
        return g

    def power(self, a, n: int):
        base = a if n >= 0 else self.inv(a)
        g = self.identity
        for _ in range(abs(n)):
            g = self.mul(g, base)
        return g

    def pretty(self) -> str:
        raise NotImplementedError


class FiniteGroup(Group):
    kind = "finite"
    is_finite = True

    def __init__(self, elements, table, generators, identity=None):
        self.elements = tuple(elements)
        self.table = dict(table)
        self.generators = tuple(generators)
        ident = identity if identity is not None else self.elements[0]
        self.identity = ident
        for a in self.elements:
            for b in self.elements:
                if (a, b) not in self.table:
                    raise ValueError(f"group table misses {a}*{b}")
                if self.table[(a, b)] not in self.elements:
                    raise ValueError(f"group table entry {a}*{b} is not an element")
        for a in self.elements:
            if self.table[(ident, a)] != a or self.table[(a, ident)] != a:
                raise ValueError(f"{ident} is not a two-sided identity")
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if self.table[(self.table[(a, b)], c)] != self.table[(a, self.table[(b, c)])]:
                        raise ValueError(f"group table not associative at ({a},{b},{c})")
        self._inv = {}
        for a in self.elements:
            inv = [b for b in self.elements if self.table[(a, b)] == ident]
            if len(inv) != 1:
                raise ValueError(f"{a} has no unique inverse")
            self._inv[a] = inv[0]
        self.is_abelian = all(self.table[(a, b)] == self.table[(b, a)] for a in self.elements for b in self.elements)
        # words from a breadth-first search of the Cayley graph
        words = {ident: []}
        queue = deque([ident])
        while queue:
            a = queue.popleft()
            for g in self.generators:
                b = self.table[(a, g)]
                if b not in words:
                    words[b] = words[a] + [(g, 1)]
                    queue.append(b)
        if len(words) != len(self.elements):
            raise ValueError("declared generators do not generate the group")
        self._words = words
        self._order = {a: i for i, a in enumerate(self.elements)}

    def mul(self, a, b):
        return self.table[(a, b)]

    def inv(self, a):
        return self._inv[a]

    def gen(self, name):
        return name

    def word(self, a):
        return list(self._words[a])

    def relators(self):
        rels = []
        for a in self.elements:
            for g in self.generators:
                b = self.table[(a, g)]
                w = self._words[a] + [(g, 1)] + [(h, -e) for h, e in reversed(self._words[b])]
                rels.append(w)
        return rels

    def render(self, a):
        return str(a)

    def sort_key(self, a):
        return self._order[a]

    def parse_token(self, tok):
        return tok if tok in self._order else None

    def pretty(self):
        n = len(self.elements)
        if n == 1:
            return "1"
        if self.is_abelian and any(self._element_order(a) == n for a in self.elements):
            return f"ℤ/{n}"
        return f"G{n}"

    def _element_order(self, a):
        k, g = 1, a
        while g != self.identity:
            g = self.table[(g, a)]
            k += 1
        return k

    def describe(self):
        return {"kind": "finite", "elements": list(self.elements), "generators": list(self.generators)}


def cyclic_group(gen: str, n: int) -> FiniteGroup:
    names = ["1"] + [gen if k == 1 else f"{gen}^{k}" for k in range(1, n)]
    table = {(names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)}
    return FiniteGroup(names, table, [gen] if n > 1 else [])


def trivial_group() -> FiniteGroup:
    return FiniteGroup(["1"], {("1", "1"): "1"}, [])


class FreeAbelianGroup(Group):
    kind = "free-abelian"
    is_abelian = True

    def __init__(self, generators):
        self.generators = tuple(generators)
        if not self.generators:
            raise ValueError("free abelian group needs at least one generator")
        self.identity = (0,) * len(self.generators)
        self._index = {g: i for i, g in enumerate(self.generators)}

    @property
    def rank(self):
        return len(self.generators)

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def gen(self, name):
        v = [0] * self.rank
        v[self._index[name]] = 1
        return tuple(v)

    def word(self, a):
        return [(g, e) for g, e in zip(self.generators, a) if e != 0]

    def evaluate(self, word):
        v = [0] * self.rank
        for name, e in word:
            v[self._index[name]] += e
        return tuple(v)

    def power(self, a, n):
        return tuple(n * x for x in a)

    def sort_key(self, a):
        return (sum(abs(x) for x in a), a)

    def relators(self):
        gens = self.generators
        return [[(gens[i], 1), (gens[j], 1), (gens[i], -1), (gens[j], -1)]
                for i in range(len(gens)) for j in range(i + 1, len(gens))]

    def render(self, a):
        parts = [g if e == 1 else f"{g}^{e}" for g, e in zip(self.generators, a) if e != 0]
        return "*".join(parts) if parts else "1"

    def parse_token(self, tok):
        return self.gen(tok) if tok in self._index else None

    def pretty(self):
        return "ℤ" if self.rank == 1 else "ℤ" + str(self.rank).translate(SUPERSCRIPT)

    def describe(self):
        return {"kind": "free-abelian", "generators": list(self.generators)}


class SemidirectZZ(Group):
    """Z x| Z: elements a^i b^j, with b a b^-1 = a^eps."""

    kind = "zz-semidirect"

    def __init__(self, a: str, b: str, eps: int):
        if eps not in (1, -1):
            raise ValueError("twist must be +1 or -1")
        self.a, self.b, self.eps = a, b, eps
        self.generators = (a, b)
        self.identity = (0, 0)
        self.is_abelian = eps == 1

    def _tw(self, j):
        return 1 if self.eps == 1 or j % 2 == 0 else -1

    def mul(self, x, y):
        (i, j), (k, l) = x, y
        return (i + self._tw(j) * k, j + l)

    def inv(self, x):
        i, j = x
        return (-self._tw(j) * i, -j)

    def gen(self, name):
        return (1, 0) if name == self.a else (0, 1)

    def word(self, x):
        i, j = x
        w = []
        if i:
            w.append((self.a, i))
        if j:
            w.append((self.b, j))
        return w

    def power(self, x, n):
        return super().power(x, n)

    def relators(self):
        return [[(self.b, 1), (self.a, 1), (self.b, -1), (self.a, -self.eps)]]

    def render(self, x):
        i, j = x
        parts = []
        if i:
            parts.append(self.a if i == 1 else f"{self.a}^{i}")
        if j:
            parts.append(self.b if j == 1 else f"{self.b}^{j}")
        return "*".join(parts) if parts else "1"

    def parse_token(self, tok):
        return self.gen(tok) if tok in self.generators else None

    def pretty(self):
        return "ℤ⋊ℤ" if self.eps == -1 else "ℤ²"

    def describe(self):
        return {"kind": "zz-semidirect", "generators": [self.a, self.b], "twist": self.eps}


# ---------------------------------------------------------------- group rings

class GroupRingElement:
    """Finite formal sum of group elements with scalar coefficients."""

    __slots__ = ("terms", "ring")

    def __init__(self, coeffs, ring: "GroupRing"):
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        acc: dict = {}
        for g, c in items:
            acc[g] = acc.get(g, 0) + c
        key = ring.group.sort_key
        self.terms = tuple(sorted(((g, ring.base.coerce(c)) for g, c in acc.items() if c != 0),
                                  key=lambda gc: key(gc[0])))
        self.ring = ring

    def _wrap(self, other):
        if isinstance(other, GroupRingElement):
            return other
        if isinstance(other, (int, Fraction, Fp)):
            return GroupRingElement({self.ring.group.identity: other}, self.ring)
        return NotImplemented

    def __add__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        d = dict(self.terms)
        for g, c in o.terms:
            d[g] = d.get(g, 0) + c
        return GroupRingElement(d, self.ring)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return GroupRingElement({g: -c for g, c in self.terms}, self.ring)

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
        mul = self.ring.group.mul
        d: dict = {}
        for g, c in self.terms:
            for h, e in o.terms:
                k = mul(g, h)
                d[k] = d.get(k, 0) + c * e
        return GroupRingElement(d, self.ring)

    def __rmul__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else o * self

    def __eq__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return False
        return self.terms == o.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def augmentation(self):
        return sum((c for _, c in self.terms), self.ring.base.zero)

    def __repr__(self):
        return self.ring.render(self)

    def __reduce__(self):
        return (GroupRingElement, (self.terms, self.ring))


class GroupRing(Ring):
    is_euclidean = False

    def __init__(self, group: Group, base: Ring = ZZ):
        self.group = group
        self.base = base
        self.commutative = group.is_abelian
        self.name = f"{base.name}[{group.pretty()}]"

    def key(self):
        return (str(self.group.describe()), self.base.key())

    def pretty(self):
        b = {"ZZ": "ℤ", "QQ": "ℚ"}.get(self.base.name, self.base.name)
        return f"{b}[{self.group.pretty()}]"

    def coerce(self, x):
        if isinstance(x, GroupRingElement):
            return x
        return GroupRingElement({self.group.identity: x}, self)

    def element(self, g, c=1):
        return GroupRingElement({g: c}, self)

    def is_unit(self, a):
        # only the trivial units +-g (c*g over a field) are recognised
        if len(a.terms) != 1:
            return False
        return self.base.is_unit(a.terms[0][1])

    def unit_inverse(self, a):
        (g, c), = a.terms
        return GroupRingElement({self.group.inv(g): self.base.unit_inverse(c)}, self)

    def render(self, a):
        a = self.coerce(a)
        ident = self.group.identity
        return render_terms([(c, "" if g == ident else self.group.render(g)) for g, c in a.terms])

    def laurent_ring(self, field: Ring) -> LaurentRing:
        if not (isinstance(self.group, FreeAbelianGroup) and self.group.rank == 1):
            raise ValueError("only Z = <t> group rings convert to Laurent polynomials")
        return LaurentRing(field, self.group.generators[0])

    def to_laurent(self, a, field: Ring) -> Laurent:
        L = self.laurent_ring(field)
        return Laurent({g[0]: field.coerce(c) for g, c in self.coerce(a).terms}, field, L.var)
