"""Presented DGAs and DG right modules over them.

A DGA is given by a finite named basis in a degree window [0, top], a
multiplication table, a differential table and optionally a degree-0 group:
when a group G is declared, degree 0 is the group ring Z[G] (the unit is the
group identity) and named generators live in positive degrees.

Elements are immutable; a product whose degree leaves the window raises
WindowOverflow instead of being dropped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from .errors import (MissingTableEntry, NoInvolution, SchemaViolation, ValidationFailed,
                     WindowOverflow)
from .expr import evaluate, parse_expr
from .groups import FiniteGroup, Group, GroupRing, GroupRingElement
from .scalars import ZZ, Ring, render_terms


def koszul_sign(p: int, q: int) -> int:
    """(-1)^(p*q)."""
    return -1 if (p * q) % 2 else 1


def sign(n: int) -> int:
    """(-1)^n."""
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class GroupElement:
    """Basis key for a group element in degree 0 (kept apart from named generators)."""

    value: object


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    detail: str = ""

    def render(self) -> str:
        w = ", ".join(str(x) for x in self.witness)
        return f"{self.kind} ({w})" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    subject: str = ""
    violations: list = field(default_factory=list)

    def add(self, kind, witness, detail=""):
        self.violations.append(Violation(kind, tuple(witness), detail))

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def kinds(self):
        return sorted({v.kind for v in self.violations})

    def render(self) -> str:
        head = f"{self.subject}: " if self.subject else ""
        if self.ok:
            return head + "ok"
        return "\n".join(head + v.render() for v in self.violations)


@dataclass(frozen=True)
class GradedBasis:
    generators: tuple  # of (name, degree)
    window: tuple

    def __post_init__(self):
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise SchemaViolation("duplicate generator names", path="basis")
        lo, hi = self.window
        for n, d in self.generators:
            if not lo <= d <= hi:
                raise SchemaViolation(f"generator {n} of degree {d} outside window [{lo}, {hi}]",
                                      path=f"basis.{n}")

    def degree(self, name):
        for n, d in self.generators:
            if n == name:
                return d
        raise KeyError(name)

    def in_degree(self, d):
        return [n for n, e in self.generators if e == d]

    @property
    def names(self):
        return [n for n, _ in self.generators]


# ---------------------------------------------------------------- elements

class AlgebraElement:
    """Homogeneous element of a presented DGA: sorted tuple of (basis key, coefficient)."""

    __slots__ = ("terms", "degree", "algebra")

    def __init__(self, algebra: "DGAPresentation", coeffs, degree: int):
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        acc: dict = {}
        coerce = algebra.scalars.coerce
        for k, c in items:
            acc[k] = acc.get(k, 0) + c
        self.terms = tuple(sorted(((k, coerce(c)) for k, c in acc.items() if c != 0),
                                  key=lambda kc: algebra.key_order(kc[0])))
        self.degree = degree
        self.algebra = algebra
        if self.terms:
            lo, hi = algebra.window
            if not lo <= degree <= hi:
                raise WindowOverflow(degree, algebra.window)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, key):
        for k, c in self.terms:
            if k == key:
                return c
        return self.algebra.scalars.zero

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if other.degree != self.degree:
            raise ValueError(f"adding elements of degrees {self.degree} and {other.degree}")
        d = dict(self.terms)
        for k, c in other.terms:
            d[k] = d.get(k, 0) + c
        return AlgebraElement(self.algebra, d, self.degree)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, [(k, -c) for k, c in self.terms], self.degree)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def scale(self, c):
        return AlgebraElement(self.algebra, [(k, c * v) for k, v in self.terms], self.degree)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def d(self):
        return self.algebra.d(self)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            if not self.terms and not other.terms:
                return True
            return self.terms == other.terms and self.degree == other.degree
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return self.algebra.render(self)


class ModuleElement:
    __slots__ = ("terms", "degree", "module")

    def __init__(self, module: "DGModulePresentation", coeffs, degree: int):
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        acc: dict = {}
        coerce = module.scalars.coerce
        for k, c in items:
            acc[k] = acc.get(k, 0) + c
        order = module.order
        self.terms = tuple(sorted(((k, coerce(c)) for k, c in acc.items() if c != 0),
                                  key=lambda kc: order[kc[0]]))
        self.degree = degree
        self.module = module

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, name):
        for k, c in self.terms:
            if k == name:
                return c
        return self.module.scalars.zero

    def __add__(self, other):
        if not isinstance(other, ModuleElement):
            if other == 0:
                return self
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        if other.degree != self.degree:
            raise ValueError(f"adding module elements of degrees {self.degree} and {other.degree}")
        d = dict(self.terms)
        for k, c in other.terms:
            d[k] = d.get(k, 0) + c
        return ModuleElement(self.module, d, self.degree)

    __radd__ = __add__

    def __neg__(self):
        return ModuleElement(self.module, [(k, -c) for k, c in self.terms], self.degree)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return ModuleElement(self.module, [(k, c * v) for k, v in self.terms], self.degree)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.module.act(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def d(self):
        return self.module.d(self)

    def __eq__(self, other):
        if isinstance(other, ModuleElement):
            if not self.terms and not other.terms:
                return True
            return self.terms == other.terms and self.degree == other.degree
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return render_terms([(c, k) for k, c in self.terms])


# ---------------------------------------------------------------- expression contexts

class _AlgebraContext:
    def __init__(self, algebra):
        self.R = algebra

    def number(self, v):
        return v

    def atom(self, name):
        return self.R.atom(name)

    def _lift(self, x):
        return x if isinstance(x, AlgebraElement) else self.R.scalar(x)

    def add(self, a, b):
        if not isinstance(a, AlgebraElement) and not isinstance(b, AlgebraElement):
            return a + b
        return self._lift(a) + self._lift(b)

    def neg(self, a):
        return -a

    def mul(self, a, b):
        if isinstance(a, AlgebraElement) and isinstance(b, AlgebraElement):
            return self.R.mul(a, b)
        if isinstance(a, AlgebraElement):
            return a.scale(b)
        if isinstance(b, AlgebraElement):
            return b.scale(a)
        return a * b

    def power(self, a, n):
        if not isinstance(a, AlgebraElement):
            if n < 0:
                return Fraction(1) / Fraction(a) ** (-n)
            return a ** n
        return self.R.power(a, n)

    def call(self, fname, a):
        a = self._lift(a)
        if fname in ("diff", "D"):
            return self.R.d(a)
        if fname in ("inv", "I"):
            return self.R.involute(a)
        raise SchemaViolation(f"unknown function {fname}")


class _ModuleContext(_AlgebraContext):
    def __init__(self, module):
        super().__init__(module.algebra)
        self.F = module

    def atom(self, name):
        if name in self.F.order:
            return self.F.gen(name)
        return self.R.atom(name)

    def add(self, a, b):
        if isinstance(a, ModuleElement) or isinstance(b, ModuleElement):
            if not (isinstance(a, ModuleElement) and isinstance(b, ModuleElement)):
                raise SchemaViolation("cannot add a module element and an algebra element")
            return a + b
        return super().add(a, b)

    def mul(self, a, b):
        if isinstance(a, ModuleElement):
            if isinstance(b, AlgebraElement):
                return self.F.act(a, b)
            if isinstance(b, ModuleElement):
                raise SchemaViolation("cannot multiply two module elements")
            return a.scale(b)
        if isinstance(b, ModuleElement):
            if isinstance(a, AlgebraElement):
                raise SchemaViolation("modules are right modules: write element*algebra")
            return b.scale(a)
        return super().mul(a, b)

    def call(self, fname, a):
        if isinstance(a, ModuleElement):
            if fname in ("diff", "D"):
                return self.F.d(a)
            raise SchemaViolation(f"unknown function {fname} on module elements")
        return super().call(fname, a)


def _parse_value(text_or_value, ctx):
    if isinstance(text_or_value, str):
        return evaluate(parse_expr(text_or_value), ctx)
    return text_or_value


# ---------------------------------------------------------------- DGA

class DGAPresentation:
    """Finitely presented DGA in a degree window.

    generators: list of (name, degree) for the named basis.  Without a group
    the unit must be among them (degree 0).  With a group, named generators
    must have positive degree and degree 0 is the group ring.
    mul/diff/involution: dicts whose values are expression strings or elements.
    Missing diff entries mean 0.
    """

    def __init__(self, generators, window, mul=None, diff=None, scalars: Ring = ZZ,
                 group: Group | None = None, involution=None, unit: str = "1", name: str = "R"):
        self.name = name
        self.scalars = scalars
        self.window = tuple(window)
        if self.window[0] != 0 or self.window[1] < 0:
            raise SchemaViolation("DGA window must be [0, top] with top >= 0", path="dga.window")
        self.group = group
        gens = [(n, int(d)) for n, d in generators]
        if group is None:
            if unit not in [n for n, _ in gens]:
                gens = [(unit, 0)] + gens
            self.unit_name = unit
        else:
            self.unit_name = None
            for n, d in gens:
                if d <= 0:
                    raise SchemaViolation(f"generator {n}: with a group declared, named generators "
                                          "must have positive degree", path=f"dga.gen.{n}")
            if gens and not group.is_finite:
                raise SchemaViolation("positive-degree generators over an infinite group are not supported",
                                      path="dga.group")
            for n, _ in gens:
                if group.parse_token(n) is not None or n in group.generators:
                    raise SchemaViolation(f"generator {n} clashes with a group element name",
                                          path=f"dga.gen.{n}")
        self.basis = GradedBasis(tuple(gens), self.window)
        self._deg = dict(gens)
        self._idx = {n: i for i, (n, _) in enumerate(gens)}
        self._mul_raw = dict(mul or {})
        self._diff_raw = dict(diff or {})
        self._inv_raw = dict(involution) if involution is not None else None
        self._mul_cache: dict = {}
        self._diff_cache: dict = {}
        self._inv_cache: dict = {}
        self._ctx = _AlgebraContext(self)
        for (a, b) in self._mul_raw:
            for x in (a, b):
                if self._resolve_key(x) is None:
                    raise SchemaViolation(f"unknown generator {x} in multiplication table",
                                          path=f"dga.mul.{a}.{b}")
        for a in self._diff_raw:
            if a not in self._deg:
                raise SchemaViolation(f"unknown generator {a} in differential table", path=f"dga.diff.{a}")
        if self._inv_raw is not None:
            for a in self._inv_raw:
                if a not in self._deg and not (group is not None and a in group.generators):
                    raise SchemaViolation(f"unknown generator {a} in involution table",
                                          path=f"dga.involution.{a}")
        # resolve every table entry now so that degree errors surface at construction
        for (a, b) in self._mul_raw:
            ka, kb = self._resolve_key(a), self._resolve_key(b)
            v = self._mul_entry(ka, kb)
            want = self.key_degree(ka) + self.key_degree(kb)
            if v.terms and v.degree != want:
                raise SchemaViolation(f"{a}*{b} has degree {v.degree}, expected {want}", path=f"dga.mul.{a}.{b}")
        for a in self._diff_raw:
            v = self._diff_entry(a)
            if v.terms and v.degree != self._deg[a] - 1:
                raise SchemaViolation(f"d({a}) has degree {v.degree}, expected {self._deg[a] - 1}",
                                      path=f"dga.diff.{a}")
        if self._inv_raw is not None:
            for a in self._inv_raw:
                v = self._inv_entry(a)
                want = self._deg.get(a, 0)
                if v.terms and v.degree != want:
                    raise SchemaViolation(f"I({a}) has degree {v.degree}, expected {want}",
                                          path=f"dga.involution.{a}")

    # ---- keys and atoms
    def key_order(self, k):
        if isinstance(k, GroupElement):
            return (0, self.group.sort_key(k.value))
        return (1, self._idx[k])

    def key_degree(self, k) -> int:
        if isinstance(k, GroupElement):
            return 0
        return self._deg[k]

    def key_name(self, k) -> str:
        if isinstance(k, GroupElement):
            return self.group.render(k.value)
        return k

    def _resolve_key(self, name):
        if name in self._deg:
            return name
        if self.group is not None:
            g = self.group.parse_token(name)
            if g is not None:
                return GroupElement(g)
            if name == "1":
                return GroupElement(self.group.identity)
        return None

    @property
    def unit_key(self):
        return GroupElement(self.group.identity) if self.group is not None else self.unit_name

    @property
    def unit(self) -> AlgebraElement:
        return AlgebraElement(self, {self.unit_key: 1}, 0)

    def zero(self, degree=0) -> AlgebraElement:
        return AlgebraElement(self, {}, degree)

    def scalar(self, c) -> AlgebraElement:
        return AlgebraElement(self, {self.unit_key: c}, 0)

    def basis_element(self, key) -> AlgebraElement:
        return AlgebraElement(self, {key: 1}, self.key_degree(key))

    def group_element(self, g) -> AlgebraElement:
        return AlgebraElement(self, {GroupElement(g): 1}, 0)

    def atom(self, name) -> AlgebraElement:
        k = self._resolve_key(name)
        if k is None:
            raise SchemaViolation(f"unknown algebra generator {name!r}")
        return self.basis_element(k)

    def element(self, spec) -> AlgebraElement:
        """Build an element from an expression string, a scalar, or an element."""
        if isinstance(spec, AlgebraElement):
            return spec
        if isinstance(spec, str):
            v = evaluate(parse_expr(spec), self._ctx)
            return v if isinstance(v, AlgebraElement) else self.scalar(v)
        return self.scalar(spec)

    def degree_is_empty(self, d) -> bool:
        if d == 0:
            return False
        return not self.basis.in_degree(d)

    # ---- tables
    def _mul_entry(self, ka, kb) -> AlgebraElement:
        key = (ka, kb)
        if key not in self._mul_cache:
            raw = self._mul_raw.get((self.key_name(ka), self.key_name(kb)))
            if raw is None:
                return None
            self._mul_cache[key] = self.element(raw)
        return self._mul_cache[key]

    def _diff_entry(self, a) -> AlgebraElement:
        if a not in self._diff_cache:
            raw = self._diff_raw.get(a)
            self._diff_cache[a] = self.zero(self._deg[a] - 1) if raw is None else self.element(raw)
        return self._diff_cache[a]

    def _inv_entry(self, a) -> AlgebraElement:
        if a not in self._inv_cache:
            raw = self._inv_raw.get(a)
            if raw is None:
                if self.group is not None and a in self.group.generators:
                    g = self.group.gen(a)
                    v = self.group_element(self.group.inv(g))
                elif a == self.unit_name:
                    v = self.unit
                else:
                    raise NoInvolution(f"no involution image declared for {a}")
            else:
                v = self.element(raw)
            self._inv_cache[a] = v
        return self._inv_cache[a]

    def mul_keys(self, ka, kb) -> AlgebraElement:
        ga, gb = isinstance(ka, GroupElement), isinstance(kb, GroupElement)
        if ga and gb:
            return self.group_element(self.group.mul(ka.value, kb.value))
        if ka == self.unit_key:
            return self.basis_element(kb)
        if kb == self.unit_key:
            return self.basis_element(ka)
        deg = self.key_degree(ka) + self.key_degree(kb)
        if deg > self.window[1]:
            raise WindowOverflow(deg, self.window)
        v = self._mul_entry(ka, kb)
        if v is not None:
            return v
        if self.degree_is_empty(deg):
            return self.zero(deg)
        raise MissingTableEntry(self.key_name(ka), self.key_name(kb))

    # ---- operations
    def mul(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        deg = x.degree + y.degree
        if not x.terms or not y.terms:
            return self.zero(deg)
        if deg > self.window[1]:
            raise WindowOverflow(deg, self.window)
        acc: dict = {}
        for ka, ca in x.terms:
            for kb, cb in y.terms:
                p = self.mul_keys(ka, kb)
                for k, c in p.terms:
                    acc[k] = acc.get(k, 0) + ca * cb * c
        return AlgebraElement(self, acc, deg)

    def power(self, x: AlgebraElement, n: int) -> AlgebraElement:
        if n < 0:
            if len(x.terms) == 1 and isinstance(x.terms[0][0], GroupElement) and \
                    self.scalars.is_unit(x.terms[0][1]):
                (k, c), = x.terms
                x = AlgebraElement(self, {GroupElement(self.group.inv(k.value)): self.scalars.unit_inverse(c)}, 0)
                n = -n
            else:
                raise SchemaViolation("negative powers only of group elements")
        out = self.unit
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def d(self, x: AlgebraElement) -> AlgebraElement:
        acc: dict = {}
        for k, c in x.terms:
            if isinstance(k, GroupElement):
                continue
            for k2, c2 in self._diff_entry(k).terms:
                acc[k2] = acc.get(k2, 0) + c * c2
        return AlgebraElement(self, acc, x.degree - 1)

    @property
    def has_involution(self):
        return self._inv_raw is not None

    def involute_key(self, k) -> AlgebraElement:
        if self._inv_raw is None:
            raise NoInvolution("the DGA declares no involution")
        if isinstance(k, GroupElement):
            out = self.unit
            # anti-multiplicative on group words
            for gname, e in reversed(self.group.word(k.value)):
                img = self._inv_entry(gname)
                out = self.mul(out, self.power(img, e))
            return out
        return self._inv_entry(k)

    def involute(self, x: AlgebraElement) -> AlgebraElement:
        acc: dict = {}
        for k, c in x.terms:
            for k2, c2 in self.involute_key(k).terms:
                acc[k2] = acc.get(k2, 0) + c * c2
        return AlgebraElement(self, acc, x.degree)

    def render(self, x: AlgebraElement) -> str:
        unit = self.unit_key
        return render_terms([(c, "" if k == unit else self.key_name(k)) for k, c in x.terms])

    # ---- group ring bridge
    def group_ring(self, base: Ring | None = None) -> GroupRing:
        if self.group is None:
            from .errors import NoGroupDeclaration
            raise NoGroupDeclaration("the DGA has no group declaration")
        key = base or self.scalars
        cache = self.__dict__.setdefault("_gr_cache", {})
        if key not in cache:
            cache[key] = GroupRing(self.group, key)
        return cache[key]

    def to_group_ring(self, x: AlgebraElement, base: Ring | None = None) -> GroupRingElement:
        GR = self.group_ring(base)
        if x.terms and x.degree != 0:
            raise ValueError("only degree-0 elements live in the group ring")
        return GroupRingElement({k.value: c for k, c in x.terms}, GR)

    def sample_keys(self):
        """Basis keys used for axiom checks: named generators, plus all elements of a finite group."""
        keys = []
        if self.group is not None and isinstance(self.group, FiniteGroup):
            keys += [GroupElement(g) for g in self.group.elements]
        keys += [n for n, _ in self.basis.generators]
        return keys

    def generator_keys(self):
        keys = []
        if self.group is not None:
            keys += [GroupElement(self.group.gen(g)) for g in self.group.generators]
        keys += [n for n, _ in self.basis.generators]
        return keys

    def concentrated_in_degree_zero(self) -> bool:
        return all(d == 0 for _, d in self.basis.generators)


def algebra_eval(R: DGAPresentation, expr) -> AlgebraElement:
    """Evaluate an expression such as '(1 - t)*(1 + t + t^2)' or 'diff(a*b)'."""
    if callable(expr):
        return R.element(expr(R))
    return R.element(expr)


def validate_dga(R: DGAPresentation) -> ValidationReport:
    rep = ValidationReport(subject=f"dga {R.name}")
    hi = R.window[1]
    keys = R.sample_keys()
    name = R.key_name
    infinite = R.group is not None and not R.group.is_finite

    # unit: declared table entries involving the unit must agree with the identity
    u = R.unit_key
    for (a, b), raw in R._mul_raw.items():
        ka, kb = R._resolve_key(a), R._resolve_key(b)
        if u in (ka, kb):
            want = R.basis_element(kb if ka == u else ka)
            if R.element(raw) != want:
                rep.add("unit", (a, b), f"declared {R.element(raw)!r}, expected {want!r}")
    if R.unit_name is not None and R._diff_entry(R.unit_name):
        rep.add("unit", (R.unit_name,), "the unit must be a cycle")

    # associativity
    for a, b, c in iproduct(keys, repeat=3):
        if all(isinstance(k, GroupElement) for k in (a, b, c)):
            continue
        if R.key_degree(a) + R.key_degree(b) + R.key_degree(c) > hi:
            continue
        ea, eb, ec = R.basis_element(a), R.basis_element(b), R.basis_element(c)
        lhs = R.mul(R.mul(ea, eb), ec)
        rhs = R.mul(ea, R.mul(eb, ec))
        if lhs != rhs:
            rep.add("associativity", (name(a), name(b), name(c)), f"(ab)c = {lhs!r}, a(bc) = {rhs!r}")

    # d^2 = 0
    for a, _ in R.basis.generators:
        dd = R.d(R.d(R.basis_element(a)))
        if dd:
            rep.add("d-squared", (a,), f"d(d({a})) = {dd!r}")

    # Leibniz
    for a, b in iproduct(keys, repeat=2):
        if isinstance(a, GroupElement) and isinstance(b, GroupElement):
            continue
        if R.key_degree(a) + R.key_degree(b) > hi:
            continue
        ea, eb = R.basis_element(a), R.basis_element(b)
        lhs = R.d(R.mul(ea, eb))
        rhs = R.mul(R.d(ea), eb) + R.mul(ea, R.d(eb)).scale(sign(ea.degree))
        if lhs != rhs:
            rep.add("leibniz", (name(a), name(b)), f"d(ab) = {lhs!r}, (da)b +- a(db) = {rhs!r}")

    # involution
    if R.has_involution:
        gkeys = list(R.basis.names)
        if R.group is not None:
            gkeys += list(R.group.generators)
        for a in gkeys:
            k = R._resolve_key(a)
            ea = R.basis_element(k)
            ia = R.involute(ea)
            if ia.terms and ia.degree != ea.degree:
                rep.add("involution-degree", (a,), f"I({a}) has degree {ia.degree}")
            if R.involute(ia) != ea:
                rep.add("involution-square", (a,), f"I(I({a})) = {R.involute(ia)!r}")
            if R.d(ia) != R.involute(R.d(ea)):
                rep.add("involution-differential", (a,), f"dI({a}) != Id({a})")
        if R.group is not None:
            for rel in R.group.relators():
                img = R.unit
                for gname, e in reversed(rel):
                    img = R.mul(img, R.power(R._inv_entry(gname), e))
                if img != R.unit:
                    word = "*".join(f"{g}^{e}" for g, e in rel)
                    rep.add("involution-relator", (word,), f"I(relator) = {img!r}")
        for a, b in iproduct(keys, repeat=2):
            if isinstance(a, GroupElement) and isinstance(b, GroupElement):
                continue
            if R.key_degree(a) + R.key_degree(b) > hi:
                continue
            ea, eb = R.basis_element(a), R.basis_element(b)
            lhs = R.involute(R.mul(ea, eb))
            rhs = R.mul(R.involute(eb), R.involute(ea)).scale(koszul_sign(ea.degree, eb.degree))
            if lhs != rhs:
                rep.add("involution-antihomomorphism", (name(a), name(b)), f"I(ab) = {lhs!r}, +-I(b)I(a) = {rhs!r}")
    if infinite and R.group is not None and len(R.group.generators) >= 2 and R.group.is_abelian:
        pass  # loads fine; homology over this group ring is refused later
    return rep


# ---------------------------------------------------------------- modules

class DGModulePresentation:
    """DG right module over a presented DGA, of finite total rank.

    action: dict (module generator, algebra generator) -> expression.  Group
    generators must be given for every module generator (they act invertibly,
    degree by degree); named algebra generators may be omitted when the target
    degree of the module is empty.
    sense: 'homological' (d lowers degree, |alpha*a| = |alpha| + |a|) or
    'cohomological' (d raises degree, |alpha*a| = |alpha| - |a|).
    """

    def __init__(self, algebra: DGAPresentation, generators, action=None, diff=None,
                 sense: str = "homological", name: str = "F"):
        if sense not in ("homological", "cohomological"):
            raise SchemaViolation(f"unknown grading sense {sense!r}", path=f"module.{name}")
        self.name = name
        self.algebra = algebra
        self.scalars = algebra.scalars
        self.sense = sense
        self.generators = tuple((n, int(d)) for n, d in generators)
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise SchemaViolation("duplicate module generator", path=f"module.{name}")
        self.order = {n: i for i, n in enumerate(names)}
        self._deg = dict(self.generators)
        self._action_raw = dict(action or {})
        self._diff_raw = dict(diff or {})
        self._action_cache: dict = {}
        self._diff_cache: dict = {}
        self._rho_cache: dict = {}
        self._ctx = _ModuleContext(self)
        R = algebra
        group_gens = set(R.group.generators) if R.group is not None else set()
        for (m, a) in self._action_raw:
            if m not in self._deg:
                raise SchemaViolation(f"unknown module generator {m}", path=f"module.{name}.act.{m}")
            if a not in R._deg and a not in group_gens:
                raise SchemaViolation(f"unknown algebra generator {a}", path=f"module.{name}.act.{m}.{a}")
        for m in self._diff_raw:
            if m not in self._deg:
                raise SchemaViolation(f"unknown module generator {m}", path=f"module.{name}.diff.{m}")
        for m in names:
            for g in group_gens:
                if (m, g) not in self._action_raw:
                    raise MissingTableEntry(m, g)
        for (m, a), raw in self._action_raw.items():
            v = self._action_entry(m, a)
            want = self.act_degree(self._deg[m], R._deg.get(a, 0))
            if v.terms and v.degree != want:
                raise SchemaViolation(f"{m}*{a} has degree {v.degree}, expected {want}",
                                      path=f"module.{name}.act.{m}.{a}")
        for m in self._diff_raw:
            v = self._diff_entry(m)
            if v.terms and v.degree != self._deg[m] + self.step:
                raise SchemaViolation(f"d({m}) has degree {v.degree}, expected {self._deg[m] + self.step}",
                                      path=f"module.{name}.diff.{m}")

    # ---- grading
    @property
    def step(self) -> int:
        return -1 if self.sense == "homological" else 1

    def act_degree(self, module_deg, alg_deg):
        return module_deg + alg_deg if self.sense == "homological" else module_deg - alg_deg

    def degree(self, name):
        return self._deg[name]

    def in_degree(self, d):
        return [n for n, e in self.generators if e == d]

    @property
    def degrees(self):
        return sorted({d for _, d in self.generators})

    @property
    def names(self):
        return [n for n, _ in self.generators]

    def gen(self, name) -> ModuleElement:
        return ModuleElement(self, {name: 1}, self._deg[name])

    def zero(self, degree=0) -> ModuleElement:
        return ModuleElement(self, {}, degree)

    def element(self, spec) -> ModuleElement:
        if isinstance(spec, ModuleElement):
            return spec
        v = evaluate(parse_expr(spec), self._ctx)
        if isinstance(v, ModuleElement):
            return v
        if v == 0 or (isinstance(v, AlgebraElement) and not v.terms):
            return self.zero()
        raise SchemaViolation(f"{spec!r} is not a module element")

    # ---- tables
    def _action_entry(self, m, a) -> ModuleElement:
        key = (m, a)
        if key not in self._action_cache:
            raw = self._action_raw.get(key)
            if raw is None:
                return None
            v = self.element(raw)
            if not v.terms:
                R = self.algebra
                v = self.zero(self.act_degree(self._deg[m], R._deg.get(a, 0)))
            self._action_cache[key] = v
        return self._action_cache[key]

    def _diff_entry(self, m) -> ModuleElement:
        if m not in self._diff_cache:
            raw = self._diff_raw.get(m)
            v = None if raw is None else self.element(raw)
            if v is None or not v.terms:
                v = self.zero(self._deg[m] + self.step)
            self._diff_cache[m] = v
        return self._diff_cache[m]

    def generator_matrix(self, gname: str, degree: int):
        """Right action of a group generator on degree `degree`, rows = source generators."""
        from .linalg import zeros
        basis = self.in_degree(degree)
        M = zeros(self.scalars, len(basis), len(basis))
        for i, m in enumerate(basis):
            v = self._action_entry(m, gname)
            for j, n in enumerate(basis):
                M[i, j] = v.coefficient(n)
        return M

    def rho(self, g, degree: int):
        """Matrix of the right action of group element g on the degree-`degree` part."""
        key = (g, degree)
        if key not in self._rho_cache:
            from .linalg import identity, matrix_inverse
            G = self.algebra.group
            n = len(self.in_degree(degree))
            M = identity(self.scalars, n)
            for gname, e in G.word(g):
                A = self.generator_matrix(gname, degree)
                if e < 0:
                    A = matrix_inverse(A, self.scalars)
                for _ in range(abs(e)):
                    M = M.dot(A)
            self._rho_cache[key] = M
        return self._rho_cache[key]

    def act_keys(self, m: str, k) -> ModuleElement:
        R = self.algebra
        if isinstance(k, GroupElement):
            if k.value == R.group.identity:
                return self.gen(m)
            d = self._deg[m]
            basis = self.in_degree(d)
            i = basis.index(m)
            row = self.rho(k.value, d)[i]
            return ModuleElement(self, {n: row[j] for j, n in enumerate(basis)}, d)
        if k == R.unit_key:
            return self.gen(m)
        deg = self.act_degree(self._deg[m], R.key_degree(k))
        v = self._action_entry(m, k)
        if v is not None:
            return v
        if not self.in_degree(deg):
            return self.zero(deg)
        raise MissingTableEntry(m, k)

    def act(self, x: ModuleElement, a: AlgebraElement) -> ModuleElement:
        deg = self.act_degree(x.degree, a.degree)
        acc: dict = {}
        for m, c in x.terms:
            for k, e in a.terms:
                for n, f in self.act_keys(m, k).terms:
                    acc[n] = acc.get(n, 0) + c * e * f
        return ModuleElement(self, acc, deg)

    def d(self, x: ModuleElement) -> ModuleElement:
        acc: dict = {}
        for m, c in x.terms:
            for n, f in self._diff_entry(m).terms:
                acc[n] = acc.get(n, 0) + c * f
        return ModuleElement(self, acc, x.degree + self.step)

    def with_changes(self, **kw) -> "DGModulePresentation":
        args = dict(algebra=self.algebra, generators=self.generators, action=self._action_raw,
                    diff=self._diff_raw, sense=self.sense, name=self.name)
        args.update(kw)
        return DGModulePresentation(**args)

    def describe(self):
        return {"name": self.name, "sense": self.sense, "generators": [list(g) for g in self.generators]}


def validate_module(F: DGModulePresentation, R: DGAPresentation | None = None) -> ValidationReport:
    R = R or F.algebra
    if R is not F.algebra:
        raise ValidationFailed("module is presented over a different DGA")
    rep = ValidationReport(subject=f"module {F.name}")
    hi = R.window[1]
    keys = R.sample_keys()
    if R.group is not None and not R.group.is_finite:
        keys = [GroupElement(R.group.gen(g)) for g in R.group.generators] + keys
    name = R.key_name

    # group generators act invertibly and relators act trivially
    if R.group is not None:
        from .linalg import identity, is_invertible
        for d in F.degrees:
            for g in R.group.generators:
                if not is_invertible(F.generator_matrix(g, d), F.scalars):
                    rep.add("group-action", (g, d), "generator does not act invertibly")
        if rep.ok:
            for d in F.degrees:
                n = len(F.in_degree(d))
                for rel in R.group.relators():
                    M = identity(F.scalars, n)
                    for gname, e in rel:
                        from .linalg import matrix_inverse
                        A = F.generator_matrix(gname, d)
                        if e < 0:
                            A = matrix_inverse(A, F.scalars)
                        for _ in range(abs(e)):
                            M = M.dot(A)
                    if not (M == identity(F.scalars, n)).all():
                        word = "*".join(f"{g}^{e}" for g, e in rel)
                        rep.add("group-relator", (word, d), "relator does not act as the identity")
        if not rep.ok:
            return rep

    # unit axiom on declared entries
    for (m, a), raw in F._action_raw.items():
        if a == R.unit_name and F.element(raw) != F.gen(m):
            rep.add("unit", (m, a), "alpha*1 must equal alpha")

    # d^2 = 0
    for m in F.names:
        dd = F.d(F.d(F.gen(m)))
        if dd:
            rep.add("d-squared", (m,), f"d(d({m})) = {dd!r}")

    # Leibniz for the action
    for m in F.names:
        for k in keys:
            if R.key_degree(k) > hi:
                continue
            x, a = F.gen(m), R.basis_element(k)
            lhs = F.d(F.act(x, a))
            rhs = F.act(F.d(x), a) + F.act(x, R.d(a)).scale(sign(x.degree))
            if lhs != rhs:
                rep.add("leibniz", (m, name(k)), f"d(m*a) = {lhs!r}, (dm)*a +- m*(da) = {rhs!r}")

    # associativity of the action
    for m in F.names:
        for a, b in iproduct(keys, repeat=2):
            if isinstance(a, GroupElement) and isinstance(b, GroupElement) and not R.group.is_finite:
                continue
            if R.key_degree(a) + R.key_degree(b) > hi:
                continue
            x, ea, eb = F.gen(m), R.basis_element(a), R.basis_element(b)
            lhs = F.act(F.act(x, ea), eb)
            rhs = F.act(x, R.mul(ea, eb))
            if lhs != rhs:
                rep.add("associativity", (m, name(a), name(b)), f"(m*a)*b = {lhs!r}, m*(ab) = {rhs!r}")
    return rep


class RegularModule:
    """R acting on itself, for R concentrated in degree 0 (a group ring).

    Its twisted complex is a free complex over the group ring (the lifted complex).
    """

    def __init__(self, algebra: DGAPresentation, base: Ring | None = None):
        if algebra.group is None or not algebra.concentrated_in_degree_zero():
            raise SchemaViolation("the regular module is only available for group rings in degree 0; "
                                  "use truncated_regular_module otherwise")
        self.algebra = algebra
        self.base = base or algebra.scalars
        self.name = "regular"
        self.sense = "homological"


def truncated_regular_module(R: DGAPresentation, name: str = "regular") -> DGModulePresentation:
    """R modulo everything above its window, as a right module over itself.

    The quotient is exact in low degrees only: for a twisted complex over a
    space with minimum index 0, homology agrees with the untruncated one in
    degrees <= top - 1.  Requires the trivial group or no group.
    """
    if R.group is not None and len(R.group.elements if R.group.is_finite else [0, 0]) != 1:
        raise SchemaViolation("truncated regular module needs a trivial group")
    unit_name = "one"
    gens = [(unit_name, 0)] + [(n, d) for n, d in R.basis.generators if n != R.unit_name]

    def mname(k):
        return unit_name if k == R.unit_key else k

    action, diff = {}, {}
    for b, db in gens:
        kb = R.unit_key if b == unit_name else b
        eb = R.basis_element(kb)
        dv = R.d(eb)
        if dv:
            diff[b] = render_terms([(c, mname(k)) for k, c in dv.terms])
        for a, da in R.basis.generators:
            if a == R.unit_name:
                continue
            if db + da > R.window[1]:
                action[(b, a)] = "0"
                continue
            p = R.mul(eb, R.basis_element(a))
            action[(b, a)] = render_terms([(c, mname(k)) for k, c in p.terms]) if p else "0"
    F = DGModulePresentation(R, gens, action, diff, name=name)
    F.truncated_top = R.window[1]
    return F
