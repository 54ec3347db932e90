"""Critical bases, twisting cocycles, twisted complexes, lifted complexes and
classical local coefficients.

For a DG right module F over R, a critical basis C and a twisting cocycle m,
the twisted complex F (x) C has differential

    d(a (x) x) = da (x) x + (-1)^|a| sum_y a.m[x, y] (x) y.

It squares to zero exactly when m satisfies the Maurer-Cartan relation

    d m[x, y] = sum_{|x| > |z| > |y|} (-1)^(|x| - |z|) m[x, z] m[z, y].
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (AlgebraElement, DGAPresentation, DGModulePresentation, RegularModule, sign)
from .complexes import ChainComplex, HomologyResult, homology
from .errors import (NoGroupDeclaration, SchemaViolation, UnsupportedRing, ValidationFailed)
from .groups import Group, GroupRing, GroupRingElement
from .linalg import identity, matmul, matrix_inverse, smith_normal_form, zeros, hstack
from .scalars import ZZ, Ring

KINDS = ("twisting", "continuation", "homotopy", "cotwisting")


@dataclass(frozen=True)
class CriticalBasis:
    """Critical points with their Morse indices, in a fixed order."""

    points: tuple  # of (name, index)
    dim: int
    name: str = "C"
    offset: int = 0  # nonzero only for regraded bases

    def __post_init__(self):
        names = [p for p, _ in self.points]
        if len(set(names)) != len(names):
            raise SchemaViolation("duplicate critical point", path=f"critical.{self.name}")
        for p, i in self.points:
            lo, hi = self.offset, self.dim + self.offset
            if not lo <= i <= hi:
                raise SchemaViolation(f"index {i} of {p} outside [{lo}, {hi}]",
                                      path=f"critical.{self.name}.{p}")

    @property
    def names(self):
        return [p for p, _ in self.points]

    def index(self, x) -> int:
        for p, i in self.points:
            if p == x:
                return i
        raise KeyError(x)

    def in_index(self, k):
        return [p for p, i in self.points if i == k]

    def position(self, x) -> int:
        return self.names.index(x)

    def regraded(self, shift: int, name=None) -> "CriticalBasis":
        return CriticalBasis(tuple((p, i + shift) for p, i in self.points), self.dim,
                             name or self.name, self.offset + shift)

    def dual(self, name=None) -> "CriticalBasis":
        """x -> x^v with |x^v| = n - |x|."""
        return CriticalBasis(tuple((p, self.dim - i) for p, i in self.points), self.dim,
                             name or self.name + "v")


class CocycleMatrix:
    """Matrix of algebra elements indexed by (x, y) in source x target.

    Degrees by kind: twisting |x|-|y|-1, continuation |x|-|y|, homotopy
    |x|-|y|+1, cotwisting (cohomological twisting, indexed by dual points)
    |y|-|x|-1 in the homological grading of R.
    """

    def __init__(self, kind: str, source: CriticalBasis, target: CriticalBasis, entries: dict,
                 algebra: DGAPresentation, name: str = "m", refs: dict | None = None):
        if kind not in KINDS:
            raise SchemaViolation(f"unknown cocycle kind {kind!r}", path=f"cocycle.{name}")
        self.kind = kind
        self.source = source
        self.target = target
        self.algebra = algebra
        self.name = name
        self.refs = dict(refs or {})
        self.entries = {}
        for (x, y), v in entries.items():
            if x not in source.names or y not in target.names:
                raise SchemaViolation(f"entry ({x}, {y}) names an unknown critical point",
                                      path=f"cocycle.{name}.{x}.{y}")
            el = algebra.element(v)
            want = self.expected_degree(x, y)
            if el.terms and el.degree != want:
                raise SchemaViolation(f"entry ({x}, {y}) has degree {el.degree}, expected {want}",
                                      path=f"cocycle.{name}.{x}.{y}")
            if el.terms:
                self.entries[(x, y)] = el

    def expected_degree(self, x, y) -> int:
        dx, dy = self.source.index(x), self.target.index(y)
        return {"twisting": dx - dy - 1, "continuation": dx - dy, "homotopy": dx - dy + 1,
                "cotwisting": dy - dx - 1}[self.kind]

    def __getitem__(self, key) -> AlgebraElement:
        v = self.entries.get(key)
        if v is None:
            return self.algebra.zero(self.expected_degree(*key))
        return v

    def nonzero(self):
        """Nonzero entries in (source order, target order)."""
        sn, tn = self.source.names, self.target.names
        return sorted(self.entries.items(), key=lambda kv: (sn.index(kv[0][0]), tn.index(kv[0][1])))

    def replace(self, entries=None, **kw) -> "CocycleMatrix":
        args = dict(kind=self.kind, source=self.source, target=self.target,
                    entries=self.entries if entries is None else entries, algebra=self.algebra,
                    name=self.name, refs=self.refs)
        args.update(kw)
        return CocycleMatrix(**args)

    def map_entries(self, f, algebra=None) -> "CocycleMatrix":
        R = algebra or self.algebra
        return CocycleMatrix(self.kind, self.source, self.target,
                             {k: f(v) for k, v in self.entries.items()}, R, self.name, self.refs)

    @classmethod
    def identity(cls, C: CriticalBasis, R: DGAPresentation, name="id"):
        return cls("continuation", C, C, {(x, x): R.unit for x in C.names}, R, name)

    @classmethod
    def zero(cls, kind, source, target, R, name="zero"):
        return cls(kind, source, target, {}, R, name)

    def __eq__(self, other):
        if not isinstance(other, CocycleMatrix):
            return NotImplemented
        return (self.kind == other.kind and self.source == other.source and self.target == other.target
                and self.entries == other.entries)

    def __repr__(self):
        body = ", ".join(f"({x},{y}): {v!r}" for (x, y), v in self.nonzero())
        return f"<{self.kind} cocycle {self.name}: {body}>"


# ---------------------------------------------------------------- diagnostics

@dataclass(frozen=True)
class Failure:
    check: str
    pair: tuple
    residual: object
    detail: str = ""

    def render(self):
        p = ", ".join(str(x) for x in self.pair)
        return f"{self.check} fails at ({p}): residual {self.residual!r}" + (f" [{self.detail}]" if self.detail else "")


@dataclass
class Diagnostic:
    subject: str = ""
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def fail(self, check, pair, residual, detail=""):
        self.failures.append(Failure(check, tuple(pair), residual, detail))

    @property
    def ok(self) -> bool:
        return not self.failures

    def __len__(self):
        return len(self.failures)

    def pairs(self):
        return [f.pair for f in self.failures]

    def render(self) -> str:
        head = f"{self.subject}: " if self.subject else ""
        if self.ok:
            return head + "ok"
        return "\n".join(head + f.render() for f in self.failures)


def check_maurer_cartan(C: CriticalBasis, R: DGAPresentation, m: CocycleMatrix) -> Diagnostic:
    """Check d m[x,y] = sum_z (-1)^(|x|-|z|) m[x,z] m[z,y] for every pair."""
    if m.kind != "twisting":
        raise SchemaViolation(f"cocycle {m.name} is {m.kind}, not twisting")
    diag = Diagnostic(subject=f"maurer-cartan {m.name}")
    for x, ix in C.points:
        for y, iy in C.points:
            if ix <= iy:
                if (x, y) in m.entries:
                    diag.fail("support", (x, y), m[(x, y)], "twisting entries need |x| > |y|")
                continue
            lhs = R.d(m[(x, y)])
            rhs = R.zero(ix - iy - 2)
            for z, iz in C.points:
                if ix > iz > iy:
                    rhs = rhs + R.mul(m[(x, z)], m[(z, y)]).scale(sign(ix - iz))
            res = lhs - rhs
            if res:
                diag.fail("maurer-cartan", (x, y), res)
    return diag


def check_cohomological_maurer_cartan(Cv: CriticalBasis, R: DGAPresentation, mv: CocycleMatrix) -> Diagnostic:
    """Check d m[x,y] = sum_z (-1)^(|x|-|z|) m[x,z] m[z,y] over dual points (|x| < |z| < |y|)."""
    diag = Diagnostic(subject=f"cohomological maurer-cartan {mv.name}")
    for x, ix in Cv.points:
        for y, iy in Cv.points:
            if ix >= iy:
                if (x, y) in mv.entries:
                    diag.fail("support", (x, y), mv[(x, y)], "cotwisting entries need |x| < |y|")
                continue
            lhs = R.d(mv[(x, y)])
            rhs = R.zero(iy - ix - 2)
            for z, iz in Cv.points:
                if ix < iz < iy:
                    rhs = rhs + R.mul(mv[(x, z)], mv[(z, y)]).scale(sign(ix - iz))
            res = lhs - rhs
            if res:
                diag.fail("cohomological-maurer-cartan", (x, y), res)
    return diag


# ---------------------------------------------------------------- twisted complexes

class TwistedComplex(ChainComplex):
    """A ChainComplex remembering where it came from and each generator's filtration level."""

    def __init__(self, ring, basis, diff, step=-1, name="", levels=None, provenance=None):
        super().__init__(ring, basis, diff, step, name)
        self.levels = dict(levels or {})
        self.provenance = dict(provenance or {})

    def regraded(self, shift: int) -> "TwistedComplex":
        basis = {k + shift: v for k, v in self.basis.items()}
        diff = {k + shift: M for k, M in self.diff.items()}
        prov = dict(self.provenance, shift=self.provenance.get("shift", 0) + shift)
        return TwistedComplex(self.ring, basis, diff, self.step, self.name, self.levels, prov)

    def map_ring(self, ring, f):
        base = super().map_ring(ring, f)
        return TwistedComplex(ring, base.basis, base.diff, self.step, self.name, self.levels, self.provenance)


def _assemble(F: DGModulePresentation, C: CriticalBasis, m: CocycleMatrix, step: int, name: str):
    R = F.algebra
    ring = F.scalars
    basis: dict = {}
    levels = {}
    for x, ix in C.points:
        for a, da in F.generators:
            basis.setdefault(da + ix, []).append((a, x))
            levels[(a, x)] = ix
    pos = {k: {lab: i for i, lab in enumerate(v)} for k, v in basis.items()}
    diff = {}
    for k, labels in basis.items():
        tgt = basis.get(k + step, [])
        M = zeros(ring, len(tgt), len(labels))
        tpos = pos.get(k + step, {})
        for j, (a, x) in enumerate(labels):
            alpha = F.gen(a)
            for b, c in F.d(alpha).terms:
                M[tpos[(b, x)], j] += c
            s = sign(alpha.degree)
            for y, _ in C.points:
                e = m.entries.get((x, y))
                if e is None:
                    continue
                for b, c in F.act(alpha, e).terms:
                    M[tpos[(b, y)], j] += s * c
        diff[k] = M
    return TwistedComplex(ring, basis, diff, step, name, levels,
                          {"module": F.name, "critical": C.name, "cocycle": m.name})


def build_twisted_complex(F, C: CriticalBasis, m: CocycleMatrix, check: bool = True) -> TwistedComplex:
    """Assemble F (x) C with the twisted differential; d^2 = 0 is certified.

    F may be a DGModulePresentation (homological) or a RegularModule, in which
    case the result is a complex of free modules over the group ring.
    """
    if m.kind != "twisting":
        raise SchemaViolation(f"cocycle {m.name} is {m.kind}, not twisting")
    if check:
        diag = check_maurer_cartan(C, m.algebra, m)
        if not diag.ok:
            raise ValidationFailed(diag.render(), report=diag)
    if isinstance(F, RegularModule):
        X = _lifted(C, m, F.algebra, F.base, name=f"{F.name}(x){C.name}")
        X.provenance["module"] = "regular"
    else:
        if F.sense != "homological":
            raise SchemaViolation("build_twisted_complex needs a homological module; "
                                  "use build_cochain_complex for cohomological ones")
        X = _assemble(F, C, m, -1, f"{F.name}(x){C.name}")
    X.check_d_squared()
    return X


def exact_through(F, C: CriticalBasis, m: CocycleMatrix):
    """Top degree through which the twisted complex of a truncated module is exact (None: all).

    A product a*m[x,y] above the window is dropped by the truncation; if it
    feeds the differential out of degree j, homology is only trusted up to j - 2.
    """
    top = getattr(F, "truncated_top", None)
    if top is None:
        return None
    bound = None
    for (x, y), e in m.entries.items():
        for a, da in F.generators:
            if da + e.degree > top:
                j = da + C.index(x)
                bound = j - 2 if bound is None else min(bound, j - 2)
    return bound


def _lifted(C: CriticalBasis, m: CocycleMatrix, R: DGAPresentation, base: Ring, name: str) -> TwistedComplex:
    GR = R.group_ring(base)
    basis = {}
    levels = {}
    for x, ix in C.points:
        basis.setdefault(ix, []).append(x)
        levels[x] = ix
    diff = {}
    for k, labels in basis.items():
        tgt = basis.get(k - 1, [])
        M = zeros(GR, len(tgt), len(labels))
        for j, x in enumerate(labels):
            for i, y in enumerate(tgt):
                e = m.entries.get((x, y))
                if e is not None:
                    M[i, j] = R.to_group_ring(e, base)
        diff[k] = M
    return TwistedComplex(GR, basis, diff, -1, name, levels, {"critical": C.name, "cocycle": m.name})


def lifted_complex(C: CriticalBasis, m: CocycleMatrix, R: DGAPresentation, base: Ring | None = None) -> TwistedComplex:
    """Free complex over H0(R) = Z[G] with d(x) = sum_{|y| = |x|-1} m[x,y] y."""
    if R.group is None:
        raise NoGroupDeclaration("lifted complex needs a group declaration on the DGA")
    for a, d in R.basis.generators:
        if d == 1 and R.d(R.basis_element(a)):
            raise ValidationFailed(f"d({a}) != 0: degree 0 of R is not H0(R), the projection is undefined")
    X = _lifted(C, m, R, base or R.scalars, name=f"lifted({C.name})")
    X.check_d_squared()
    return X


# ---------------------------------------------------------------- local coefficients

class Representation:
    """Finite-rank right module over Z[G] (or k[G]): one matrix per group generator.

    Row vectors are acted on from the right: v.g = v @ rho(g).
    """

    def __init__(self, group: Group, scalars: Ring, rank: int, generator_matrices: dict, name="M"):
        self.group = group
        self.scalars = scalars
        self.rank = rank
        self.name = name
        self.gens = {}
        for g in group.generators:
            if g not in generator_matrices:
                raise SchemaViolation(f"representation {name} misses generator {g}")
            A = np.array(generator_matrices[g], dtype=object)
            self.gens[g] = np.array([[scalars.coerce(v) for v in row] for row in A], dtype=object).reshape(rank, rank)
        try:
            self._inv = {g: matrix_inverse(A, scalars) for g, A in self.gens.items()}
        except ValueError:
            raise ValidationFailed(f"representation {name}: a generator matrix is not invertible") from None
        self._cache = {}
        for rel in group.relators():
            if not (self.rho_word(rel) == identity(scalars, rank)).all():
                raise ValidationFailed(f"representation {name} does not respect the group relations")

    def rho_word(self, word):
        M = identity(self.scalars, self.rank)
        for g, e in word:
            A = self.gens[g] if e > 0 else self._inv[g]
            for _ in range(abs(e)):
                M = matmul(M, A, self.scalars)
        return M

    def rho(self, g):
        if g not in self._cache:
            self._cache[g] = self.rho_word(self.group.word(g))
        return self._cache[g]

    def rho_element(self, a: GroupRingElement):
        M = zeros(self.scalars, self.rank, self.rank)
        for g, c in a.terms:
            M = M + self.rho(g) * self.scalars.coerce(c)
        return M

    def with_scalars(self, scalars: Ring) -> "Representation":
        return Representation(self.group, scalars, self.rank,
                              {g: [[scalars.coerce(v) for v in row] for row in A] for g, A in self.gens.items()},
                              self.name)

    @classmethod
    def trivial(cls, group, scalars=ZZ):
        return cls(group, scalars, 1, {g: [[1]] for g in group.generators}, "trivial")

    @classmethod
    def from_character(cls, w, scalars=ZZ):
        return cls(w.group, scalars, 1, {g: [[w.signs[g]]] for g in w.group.generators}, w.name)

    @classmethod
    def regular(cls, group, scalars=ZZ):
        if not group.is_finite:
            raise UnsupportedRing(f"the group ring of {group.pretty()} has infinite rank over the scalars")
        els = list(group.elements)
        mats = {}
        for g in group.generators:
            A = [[0] * len(els) for _ in els]
            for i, h in enumerate(els):
                A[i][els.index(group.mul(h, g))] = 1
            mats[g] = A
        return cls(group, scalars, len(els), mats, "regular")

    @classmethod
    def from_module(cls, F: DGModulePresentation, degree: int = 0):
        if any(d != degree for _, d in F.generators):
            raise UnsupportedRing("only modules concentrated in one degree give classical local systems")
        G = F.algebra.group
        mats = {g: F.generator_matrix(g, degree) for g in G.generators}
        return cls(G, F.scalars, len(F.generators), mats, F.name)


def local_system_complex(M: Representation, L: ChainComplex, scalars: Ring | None = None) -> ChainComplex:
    """M (x)_{Z[G]} L for a free left Z[G]-complex L."""
    K = scalars or M.scalars
    if K != M.scalars:
        M = M.with_scalars(K)
    n = M.rank
    basis = {k: [(i, x) for x in labels for i in range(n)] for k, labels in L.basis.items()}
    diff = {}
    for k in L.degrees:
        D = L.matrix(k)
        src, tgt = L.basis[k], L.basis.get(k + L.step, [])
        N = zeros(K, len(tgt) * n, len(src) * n)
        for xi in range(len(src)):
            for yi in range(len(tgt)):
                e = D[yi, xi]
                if e == 0:
                    continue
                rho = M.rho_element(L.ring.coerce(e))
                for i in range(n):
                    for j in range(n):
                        N[yi * n + j, xi * n + i] = rho[i, j]
        diff[k] = N
    X = ChainComplex(K, basis, diff, L.step, f"{M.name}(x){L.name}")
    X.check_d_squared()
    return X


def local_coefficient_homology(M, L: ChainComplex, scalars: Ring | None = None) -> HomologyResult:
    """Homology of M (x)_{Z[G]} L for a finite-rank representation M."""
    if isinstance(M, DGModulePresentation):
        M = Representation.from_module(M)
    if not isinstance(L.ring, GroupRing):
        raise UnsupportedRing("local coefficients need a complex over a group ring")
    return homology(local_system_complex(M, L, scalars))


# ---------------------------------------------------------------- degree 0

@dataclass
class ModulePresentation:
    generators: list
    relations: np.ndarray
    ring: Ring
    free_rank: int
    torsion: list

    def describe(self):
        from .complexes import describe_group
        return describe_group(self.ring, self.free_rank, self.torsion)


def _cokernel(rel: np.ndarray, ring: Ring, n: int):
    if rel.shape[1] == 0:
        return n, []
    snf = smith_normal_form(rel, ring)
    torsion = [d for d in snf.diagonal if not ring.is_unit(d)]
    return n - snf.rank, torsion


def degree_zero_formula(F: DGModulePresentation, L: ChainComplex, C: CriticalBasis | None = None,
                        m: CocycleMatrix | None = None):
    """Present H0(F) (x)_{H0 R} H0(L) and compare with H0 of the twisted complex.

    Generators are f (x) x for f in F_0 and x in L_0; relations come from
    d(F_1) (x) L_0 and F_0 (x) d(L_1).  Returns (presentation, diagnostic).
    """
    if not isinstance(F, DGModulePresentation):
        # regular coefficients: H0(F) is H0(R) itself, so the formula is H0 of the lifted complex
        raise UnsupportedRing("degree_zero_formula takes a DG module presentation")
    R = F.algebra
    ring = F.scalars
    if not isinstance(L.ring, GroupRing):
        raise UnsupportedRing("degree_zero_formula needs the lifted complex over a group ring")
    f0, f1 = F.in_degree(0), F.in_degree(1)
    l0, l1 = L.labels(0), L.labels(1)
    gens = [(f, x) for x in l0 for f in f0]
    pos = {g: i for i, g in enumerate(gens)}
    cols = []
    for x in l0:
        for b in f1:
            col = zeros(ring, len(gens), 1)
            for f, c in F.d(F.gen(b)).terms:
                col[pos[(f, x)], 0] += c
            cols.append(col)
    D = L.matrix(1)
    for xi, x1 in enumerate(l1):
        for f in f0:
            col = zeros(ring, len(gens), 1)
            for yi, y in enumerate(l0):
                e = L.ring.coerce(D[yi, xi])
                for g, c in e.terms:
                    img = F.act(F.gen(f), R.group_element(g))
                    for h, v in img.terms:
                        col[pos[(h, y)], 0] += c * v
            cols.append(col)
    rel = hstack(cols, ring, len(gens))
    free, torsion = _cokernel(rel, ring, len(gens))
    pres = ModulePresentation(gens, rel, ring, free, torsion)
    diag = Diagnostic(subject="degree-zero formula")
    if C is not None and m is not None:
        X = build_twisted_complex(F, C, m)
        H = homology(X, degrees=[0])
        if (H[0].free_rank, list(H[0].torsion)) != (free, list(torsion)):
            diag.fail("degree-zero", (0,), f"{pres.describe()} vs {H.describe(0)}")
        else:
            diag.notes.append(f"H0 = {pres.describe()} both ways")
    return pres, diag
