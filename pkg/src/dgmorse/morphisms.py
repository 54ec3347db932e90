"""Continuation and homotopy cocycles, induced chain maps and homotopies, DGA
morphisms, module morphisms, mapping cones and maps on homology.

Equations (all degrees are Morse indices, m0 on C0, m1 on C1):

  continuation  d nu[x,y] = sum_z m0[x,z] nu[z,y] + sum_z (-1)^(|x|-|z|-1) nu[x,z] m1[z,y]
  homotopy      d h[x,y]  = nu1[x,y] - nu0[x,y] + sum_z (-1)^(|x|-|z|) m0[x,z] h[z,y]
                            + sum_z (-1)^(|x|-|z|) h[x,z] m1[z,y]

  Psi(a (x) x) = sum_y a.nu[x,y] (x) y,   h(a (x) x) = (-1)^|a| sum_y a.h[x,y] (x) y.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .algebra import (AlgebraElement, DGAPresentation, DGModulePresentation, GroupElement, RegularModule,
                      sign)
from .complexes import ChainComplex, HomologyResult, homology
from .errors import (NotAChainMap, NotAHomotopy, NotModuleMorphism, SchemaViolation, ValidationFailed,
                     WindowOverflow)
from .groups import GroupRing
from .linalg import compose, hstack, matmul, smith_normal_form, zeros
from .scalars import Ring
from .twisted import (CocycleMatrix, CriticalBasis, Diagnostic, TwistedComplex, build_twisted_complex,
                      check_maurer_cartan)


# ---------------------------------------------------------------- cocycle checks

def check_continuation_cocycle(m0: CocycleMatrix, m1: CocycleMatrix, nu: CocycleMatrix) -> Diagnostic:
    if nu.kind != "continuation":
        raise SchemaViolation(f"cocycle {nu.name} is {nu.kind}, not continuation")
    R = nu.algebra
    C0, C1 = nu.source, nu.target
    diag = Diagnostic(subject=f"continuation {nu.name}")
    for x, ix in C0.points:
        for y, iy in C1.points:
            lhs = R.d(nu[(x, y)])
            rhs = R.zero(ix - iy - 1)
            for z, iz in C0.points:
                a = m0.entries.get((x, z))
                b = nu.entries.get((z, y))
                if a is not None and b is not None:
                    rhs = rhs + R.mul(a, b)
            for z, iz in C1.points:
                a = nu.entries.get((x, z))
                b = m1.entries.get((z, y))
                if a is not None and b is not None:
                    rhs = rhs + R.mul(a, b).scale(sign(ix - iz - 1))
            res = lhs - rhs
            if res:
                diag.fail("continuation", (x, y), res)
    return diag


def check_homotopy_cocycle(nu0: CocycleMatrix, nu1: CocycleMatrix, h: CocycleMatrix,
                           m0: CocycleMatrix, m1: CocycleMatrix) -> Diagnostic:
    if h.kind != "homotopy":
        raise SchemaViolation(f"cocycle {h.name} is {h.kind}, not homotopy")
    R = h.algebra
    C0, C1 = h.source, h.target
    diag = Diagnostic(subject=f"homotopy {h.name}")
    for x, ix in C0.points:
        for y, iy in C1.points:
            lhs = R.d(h[(x, y)])
            rhs = nu1[(x, y)] - nu0[(x, y)]
            for z, iz in C0.points:
                a, b = m0.entries.get((x, z)), h.entries.get((z, y))
                if a is not None and b is not None:
                    rhs = rhs + R.mul(a, b).scale(sign(ix - iz))
            for z, iz in C1.points:
                a, b = h.entries.get((x, z)), m1.entries.get((z, y))
                if a is not None and b is not None:
                    rhs = rhs + R.mul(a, b).scale(sign(ix - iz))
            res = lhs - rhs
            if res:
                diag.fail("homotopy", (x, y), res)
    return diag


def compose_cocycles(first: CocycleMatrix, second: CocycleMatrix, name=None) -> CocycleMatrix:
    """Continuation cocycle of the composite map: (first . second)[x, w] = sum_y first[x,y] second[y,w]."""
    R = first.algebra
    entries = {}
    for x in first.source.names:
        for w in second.target.names:
            acc = R.zero(first.source.index(x) - second.target.index(w))
            for y in first.target.names:
                a, b = first.entries.get((x, y)), second.entries.get((y, w))
                if a is not None and b is not None:
                    acc = acc + R.mul(a, b)
            if acc:
                entries[(x, w)] = acc
    return CocycleMatrix("continuation", first.source, second.target, entries, R,
                         name or f"{first.name}.{second.name}")


# ---------------------------------------------------------------- chain maps

@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    matrices: dict
    shift: int = 0
    name: str = "Psi"
    expected_quasi_iso: bool | None = None

    def matrix(self, k):
        M = self.matrices.get(k)
        if M is None:
            return zeros(self.source.ring, self.target.dim(k + self.shift), self.source.dim(k))
        return M

    def check(self):
        """Certify d Psi = (-1)^shift Psi d exactly; raise NotAChainMap otherwise."""
        ring = self.target.ring
        s = sign(self.shift)
        for k in sorted(set(self.source.degrees) | {d - self.shift for d in self.target.degrees}):
            lhs = compose(self.target.matrix(k + self.shift), self.matrix(k), ring)
            rhs = compose(self.matrix(k + self.source.step), self.source.matrix(k), ring)
            for (i, j), v in np.ndenumerate(lhs):
                if v != s * rhs[i, j]:
                    raise NotAChainMap(k, self.source.labels(k)[j], residual=v - s * rhs[i, j])
            if lhs.shape != rhs.shape:
                raise NotAChainMap(k, None)
        return True

    def then(self, other: "ChainMap") -> "ChainMap":
        """other o self."""
        ring = self.target.ring
        mats = {k: compose(other.matrix(k + self.shift), self.matrix(k), ring) for k in self.source.degrees}
        return ChainMap(self.source, other.target, mats, self.shift + other.shift, f"{other.name}.{self.name}")


@dataclass
class ChainHomotopy:
    source: ChainComplex
    target: ChainComplex
    matrices: dict
    psi0: ChainMap
    psi1: ChainMap

    def matrix(self, k):
        M = self.matrices.get(k)
        if M is None:
            return zeros(self.source.ring, self.target.dim(k + 1), self.source.dim(k))
        return M

    def check(self):
        ring = self.target.ring
        for k in self.source.degrees:
            lhs = self.psi1.matrix(k) - self.psi0.matrix(k)
            rhs = compose(self.target.matrix(k + 1), self.matrix(k), ring) + \
                compose(self.matrix(k - 1), self.source.matrix(k), ring)
            for (i, j), v in np.ndenumerate(lhs):
                if v != rhs[i, j]:
                    raise NotAHomotopy(k, self.source.labels(k)[j], residual=v - rhs[i, j])
        return True


def _cocycle_map_matrices(F, src: TwistedComplex, tgt: TwistedComplex, cocycle: CocycleMatrix,
                          shift: int, signed: bool):
    """Matrices of a (a (x) x) -> (+-) sum_y a.c[x,y] (x) y between two twisted complexes."""
    ring = tgt.ring
    mats = {}
    if isinstance(F, RegularModule):
        R = F.algebra
        for k in src.degrees:
            tl = tgt.labels(k + shift)
            M = zeros(ring, len(tl), src.dim(k))
            for j, x in enumerate(src.labels(k)):
                for i, y in enumerate(tl):
                    e = cocycle.entries.get((x, y))
                    if e is not None and e.degree == 0:
                        M[i, j] = R.to_group_ring(e, F.base)
            mats[k] = M
        return mats
    for k in src.degrees:
        tl = tgt.labels(k + shift)
        tpos = {lab: i for i, lab in enumerate(tl)}
        M = zeros(ring, len(tl), src.dim(k))
        for j, (a, x) in enumerate(src.labels(k)):
            alpha = F.gen(a)
            s = sign(alpha.degree) if signed else 1
            for (x2, y), e in cocycle.entries.items():
                if x2 != x:
                    continue
                for b, c in F.act(alpha, e).terms:
                    M[tpos[(b, y)], j] += s * c
        mats[k] = M
    return mats


def induce_chain_map(nu: CocycleMatrix, F, m0: CocycleMatrix, m1: CocycleMatrix,
                     check: bool = True, source=None, target=None) -> ChainMap:
    """Psi(a (x) x0) = sum a.nu[x0, y1] (x) y1, certified to commute with d."""
    if check:
        diag = check_continuation_cocycle(m0, m1, nu)
        if not diag.ok:
            raise ValidationFailed(diag.render(), report=diag)
    src = source or build_twisted_complex(F, m0.source, m0)
    tgt = target or build_twisted_complex(F, m1.source, m1)
    Psi = ChainMap(src, tgt, _cocycle_map_matrices(F, src, tgt, nu, 0, False), 0, nu.name)
    Psi.check()
    return Psi


def induce_homotopy(h: CocycleMatrix, F, m0: CocycleMatrix, m1: CocycleMatrix,
                    nu0: CocycleMatrix, nu1: CocycleMatrix, check: bool = True) -> ChainHomotopy:
    """h(a (x) x0) = (-1)^|a| sum a.h[x0, y1] (x) y1, certified: Psi1 - Psi0 = dh + hd."""
    if check:
        diag = check_homotopy_cocycle(nu0, nu1, h, m0, m1)
        if not diag.ok:
            raise ValidationFailed(diag.render(), report=diag)
    src = build_twisted_complex(F, m0.source, m0)
    tgt = build_twisted_complex(F, m1.source, m1)
    psi0 = induce_chain_map(nu0, F, m0, m1, check=check, source=src, target=tgt)
    psi1 = induce_chain_map(nu1, F, m0, m1, check=check, source=src, target=tgt)
    H = ChainHomotopy(src, tgt, _cocycle_map_matrices(F, src, tgt, h, 1, True), psi0, psi1)
    H.check()
    return H


def zero_map(source: ChainComplex, target: ChainComplex, shift: int = 0) -> ChainMap:
    return ChainMap(source, target, {}, shift, "zero")


def identity_map(X: ChainComplex) -> ChainMap:
    from .linalg import identity
    return ChainMap(X, X, {k: identity(X.ring, X.dim(k)) for k in X.degrees}, 0, "id")


# ---------------------------------------------------------------- DGA morphisms

class DGAMorphism:
    """Generator images of a DGA map R -> R'.  Group generators must go to group elements."""

    def __init__(self, source: DGAPresentation, target: DGAPresentation, images: dict, name="Phi"):
        self.source, self.target, self.name = source, target, name
        self.images = {}
        for g, v in images.items():
            self.images[g] = target.element(v)
        gens = list(source.basis.names)
        if source.group is not None:
            gens += list(source.group.generators)
        for g in gens:
            if g == source.unit_name:
                self.images.setdefault(g, target.unit)
            if g not in self.images:
                raise SchemaViolation(f"morphism {name} has no image for {g}", path=f"morphism.{name}.{g}")
        if source.group is not None:
            for g in source.group.generators:
                v = self.images[g]
                if len(v.terms) != 1 or not isinstance(v.terms[0][0], GroupElement) or v.terms[0][1] != 1:
                    raise SchemaViolation(f"{name}({g}) must be a group element", path=f"morphism.{name}.{g}")

    def apply_key(self, k) -> AlgebraElement:
        R, T = self.source, self.target
        if isinstance(k, GroupElement):
            out = T.unit
            for g, e in R.group.word(k.value):
                out = T.mul(out, T.power(self.images[g], e))
            return out
        return self.images[k]

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        T = self.target
        acc = T.zero(x.degree)
        for k, c in x.terms:
            acc = acc + self.apply_key(k).scale(c)
        return acc

    def validate(self) -> Diagnostic:
        R, T = self.source, self.target
        diag = Diagnostic(subject=f"dga morphism {self.name}")
        for g, v in self.images.items():
            k = R._resolve_key(g)
            if v.terms and v.degree != R.key_degree(k):
                diag.fail("degree", (g,), v)
        for a in R.basis.names:
            ea = R.basis_element(a)
            res = T.d(self(ea)) - self(R.d(ea))
            if res:
                diag.fail("differential", (a,), res)
        if self(R.unit) != T.unit:
            diag.fail("unit", ("1",), self(R.unit))
        if R.group is not None:
            for rel in R.group.relators():
                img = T.unit
                for g, e in rel:
                    img = T.mul(img, T.power(self.images[g], e))
                if img != T.unit:
                    diag.fail("relator", tuple(f"{g}^{e}" for g, e in rel), img)
        keys = R.sample_keys()
        for a, b in iproduct(keys, repeat=2):
            if isinstance(a, GroupElement) and isinstance(b, GroupElement):
                continue
            if R.key_degree(a) + R.key_degree(b) > R.window[1]:
                continue
            ea, eb = R.basis_element(a), R.basis_element(b)
            try:
                res = self(R.mul(ea, eb)) - T.mul(self(ea), self(eb))
            except WindowOverflow as exc:
                diag.fail("window", (R.key_name(a), R.key_name(b)), str(exc))
                continue
            if res:
                diag.fail("multiplicative", (R.key_name(a), R.key_name(b)), res)
        return diag


def pushforward_cocycle(Phi: DGAMorphism, m: CocycleMatrix, modules=()) -> CocycleMatrix:
    """m'[x,y] = Phi(m[x,y]); MC re-verified, and for each module F' over the
    target the twisted complexes (F', m') and (Phi^* F', m) are compared entry by entry."""
    diag = Phi.validate()
    if not diag.ok:
        raise ValidationFailed(diag.render(), report=diag)
    mp = m.map_entries(Phi, algebra=Phi.target)
    if mp.kind == "twisting":
        d = check_maurer_cartan(mp.source, Phi.target, mp)
        if not d.ok:
            raise ValidationFailed(d.render(), report=d)
    for Fp in modules:
        A = build_twisted_complex(Fp, mp.source, mp)
        B = build_twisted_complex(pullback_module(Phi, Fp), m.source, m)
        for k in sorted(set(A.degrees) | set(B.degrees)):
            if A.labels(k) != B.labels(k) or not (A.matrix(k) == B.matrix(k)).all():
                raise ValidationFailed(f"pushforward and pullback complexes differ in degree {k}")
    return mp


def pullback_module(Phi: DGAMorphism, Fp: DGModulePresentation) -> DGModulePresentation:
    """Phi^* F': the same graded module, with a acting as Phi(a)."""
    R = Phi.source
    action = {}
    gens = list(R.basis.names)
    if R.group is not None:
        gens += list(R.group.generators)
    for a in gens:
        if a == R.unit_name:
            continue
        img = Phi.images[a]
        for m, _ in Fp.generators:
            v = Fp.act(Fp.gen(m), img)
            action[(m, a)] = repr(v) if v else "0"
    diff = {m: repr(Fp.d(Fp.gen(m))) for m in Fp.names if Fp.d(Fp.gen(m))}
    return DGModulePresentation(R, Fp.generators, action, diff, Fp.sense, name=f"{Phi.name}*{Fp.name}")


# ---------------------------------------------------------------- module morphisms

class ModuleMorphism:
    """Degree-0 map F -> F' given on generators."""

    def __init__(self, source: DGModulePresentation, target: DGModulePresentation, images: dict, name="Gamma"):
        self.source, self.target, self.name = source, target, name
        self.images = {}
        for a in source.names:
            v = images.get(a, "0")
            el = target.element(v)
            if not el.terms:
                el = target.zero(source.degree(a))
            self.images[a] = el

    def __call__(self, x):
        acc = self.target.zero(x.degree)
        for a, c in x.terms:
            acc = acc + self.images[a].scale(c)
        return acc

    def validate(self) -> Diagnostic:
        F, G = self.source, self.target
        R = F.algebra
        diag = Diagnostic(subject=f"module morphism {self.name}")
        if G.algebra is not R:
            diag.fail("algebra", (F.name, G.name), "modules over different DGAs")
            return diag
        for a in F.names:
            v = self.images[a]
            if v.terms and v.degree != F.degree(a):
                diag.fail("degree", (a,), v)
            res = G.d(v) - self(F.d(F.gen(a)))
            if res:
                diag.fail("differential", (a,), res)
            keys = R.generator_keys() + [k for k in R.sample_keys() if k not in R.generator_keys()]
            for k in keys:
                ea = R.basis_element(k)
                res = self(F.act(F.gen(a), ea)) - G.act(v, ea)
                if res:
                    diag.fail("action", (a, R.key_name(k)), res)
        return diag

    def chain_map(self) -> ChainMap:
        """Gamma as a chain map between the underlying complexes of F and F'."""
        X, Y = module_complex(self.source), module_complex(self.target)
        mats = {}
        for k in X.degrees:
            M = zeros(X.ring, Y.dim(k), X.dim(k))
            for j, a in enumerate(X.labels(k)):
                for b, c in self.images[a].terms:
                    M[Y.index(k, b), j] = c
            mats[k] = M
        return ChainMap(X, Y, mats, 0, self.name)


def module_complex(F: DGModulePresentation) -> ChainComplex:
    basis = {d: F.in_degree(d) for d in F.degrees}
    diff = {}
    for d in F.degrees:
        tgt = basis.get(d + F.step, [])
        M = zeros(F.scalars, len(tgt), len(basis[d]))
        for j, a in enumerate(basis[d]):
            for b, c in F.d(F.gen(a)).terms:
                M[tgt.index(b), j] = c
        diff[d] = M
    return ChainComplex(F.scalars, basis, diff, F.step, F.name)


def module_morphism_chain_map(Gamma: ModuleMorphism, C: CriticalBasis, m: CocycleMatrix) -> ChainMap:
    """Gamma(a (x) x) = Gamma(a) (x) x between the two twisted complexes."""
    diag = Gamma.validate()
    if not diag.ok:
        raise NotModuleMorphism(diag.render())
    src = build_twisted_complex(Gamma.source, C, m)
    tgt = build_twisted_complex(Gamma.target, C, m)
    mats = {}
    for k in src.degrees:
        tl = tgt.labels(k)
        tpos = {lab: i for i, lab in enumerate(tl)}
        M = zeros(src.ring, len(tl), src.dim(k))
        for j, (a, x) in enumerate(src.labels(k)):
            for b, c in Gamma.images[a].terms:
                M[tpos[(b, x)], j] += c
        mats[k] = M
    Psi = ChainMap(src, tgt, mats, 0, Gamma.name)
    Psi.check()
    Psi.expected_quasi_iso = is_quasi_iso(Gamma.chain_map())[0]
    return Psi


# ---------------------------------------------------------------- quasi-isomorphisms

@dataclass
class ConeCertificate:
    cone: ChainComplex
    homology: HomologyResult
    nonzero_degrees: list = field(default_factory=list)


def mapping_cone(Psi: ChainMap) -> ChainComplex:
    """Cone_k = C_{k-1} + D_k with d = [[-d_C, 0], [Psi, d_D]]."""
    if Psi.shift != 0:
        raise SchemaViolation("mapping cones need a degree-0 chain map")
    C, D = Psi.source, Psi.target
    ring = D.ring
    degs = sorted({k + 1 for k in C.degrees} | set(D.degrees))
    basis = {k: [("s", lab) for lab in C.labels(k - 1)] + [("t", lab) for lab in D.labels(k)] for k in degs}
    diff = {}
    for k in degs:
        a, b = C.dim(k - 1), D.dim(k)
        a2, b2 = C.dim(k - 2), D.dim(k - 1)
        M = zeros(ring, a2 + b2, a + b)
        if a:
            M[:a2, :a] = -C.matrix(k - 1) if a2 else M[:a2, :a]
            if b2:
                M[a2:, :a] = Psi.matrix(k - 1)
        if b and b2:
            M[a2:, a:] = D.matrix(k)
        diff[k] = M
    X = ChainComplex(ring, basis, diff, -1, f"cone({Psi.name})")
    X.check_d_squared()
    return X


def is_quasi_iso(Psi: ChainMap):
    """(verdict, certificate): True iff the mapping cone is acyclic."""
    cone = mapping_cone(Psi)
    H = homology(cone)
    bad = H.nonzero_degrees()
    return (not bad), ConeCertificate(cone, H, bad)


def _reduce(v, d, ring):
    if d == 0:
        return v
    if hasattr(ring, "reduce_mod"):
        return ring.reduce_mod(v, d)
    r = ring.divmod(v, d)[1]
    return r % d if isinstance(r, int) and isinstance(d, int) else r


def induced_on_homology(Psi: ChainMap, Hs: HomologyResult | None = None, Ht: HomologyResult | None = None) -> dict:
    """Per degree k: matrix of Psi_* with columns indexed by source generators
    (free first, then torsion) and rows by target generators; torsion rows are
    reduced modulo their order."""
    Hs = Hs or homology(Psi.source)
    Ht = Ht or homology(Psi.target)
    ring = Ht.ring
    out = {}
    for k in sorted(set(Hs.degrees)):
        gs, gt = Hs[k], Ht[k + Psi.shift]
        M = Psi.matrix(k)
        M = _homology_ring_matrix(M, Psi.target, ring)
        A = zeros(ring, len(gt.reps), len(gs.reps))
        for j, z in enumerate(gs.reps):
            img = matmul(M, z.reshape(-1, 1), ring)
            for i, lam in enumerate(gt.detectors):
                v = sum((lam[t] * img[t, 0] for t in range(img.shape[0])), ring.zero)
                A[i, j] = _reduce(v, gt.orders[i], ring)
        out[k] = A
    return out


def _homology_ring_matrix(M, X: ChainComplex, ring: Ring):
    """Bring a map's matrix into the ring the homology was computed over."""
    if isinstance(X.ring, GroupRing) and not isinstance(ring, GroupRing):
        if X.ring.group.is_finite:
            raise SchemaViolation("induced maps over finite group rings: restrict scalars first")
        from .linalg import map_entries
        return map_entries(M, lambda a: X.ring.to_laurent(a, X.ring.base), ring)
    return M


def is_isomorphism(A, src_orders, tgt_orders, ring: Ring) -> bool:
    """Is the map given by A between sum R/(src_orders) and sum R/(tgt_orders) bijective?"""
    nt, ns = A.shape
    T = [i for i, d in enumerate(tgt_orders) if d != 0]
    Tm = zeros(ring, nt, len(T))
    for c, i in enumerate(T):
        Tm[i, c] = tgt_orders[i]
    B = hstack([A, Tm], ring, nt)
    if nt:
        snf = smith_normal_form(B, ring)
        if snf.rank != nt or not all(ring.is_unit(d) for d in snf.diagonal):
            return False
    if ns == 0:
        return True
    if nt == 0:
        return all(d != 0 and ring.is_unit(d) for d in src_orders)
    snf = smith_normal_form(B, ring)
    ker = snf.V[:, snf.rank:]
    for c in range(ker.shape[1]):
        for i in range(ns):
            x, d = ker[i, c], src_orders[i]
            if (d == 0 and x != 0) or (d != 0 and ring.divmod(x, d)[1] != 0):
                return False
    return True


def induced_is_isomorphism(Psi: ChainMap) -> bool:
    Hs, Ht = homology(Psi.source), homology(Psi.target)
    ind = induced_on_homology(Psi, Hs, Ht)
    for k in sorted(set(Hs.degrees) | set(Ht.degrees)):
        gs, gt = Hs[k], Ht[k]
        A = ind.get(k)
        if A is None:
            A = zeros(Ht.ring, len(gt.reps), len(gs.reps))
        if not is_isomorphism(A, gs.orders, gt.orders, Ht.ring):
            return False
    return True


# ---------------------------------------------------------------- lifted maps

def lifted_map(nu: CocycleMatrix, base: Ring | None = None) -> dict:
    """Degree-0 entries of a continuation cocycle as group-ring matrices, per index."""
    R = nu.algebra
    GR = R.group_ring(base)
    out = {}
    for k in sorted({i for _, i in nu.source.points} | {i for _, i in nu.target.points}):
        xs, ys = nu.source.in_index(k), nu.target.in_index(k)
        M = zeros(GR, len(ys), len(xs))
        for j, x in enumerate(xs):
            for i, y in enumerate(ys):
                e = nu.entries.get((x, y))
                if e is not None:
                    M[i, j] = R.to_group_ring(e, base)
        out[k] = M
    return out


def certify_invertible(M: np.ndarray, ring: Ring):
    """Inverse of M over a group ring found by elimination with unit pivots, or None.

    None means no certificate was found (the matrix may still be invertible)."""
    n, m = M.shape
    if n != m:
        return None
    A = [[ring.coerce(M[i, j]) for j in range(n)] + [ring.one if i == j else ring.zero for j in range(n)]
         for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if ring.is_unit(A[r][c])), None)
        if p is None:
            return None
        A[c], A[p] = A[p], A[c]
        inv = ring.unit_inverse(A[c][c])
        A[c] = [inv * v for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    inv = zeros(ring, n, n)
    for i in range(n):
        for j in range(n):
            inv[i, j] = A[i][n + j]
    return inv


def lifted_map_invertible(nu: CocycleMatrix) -> bool:
    """True when every index block of the lifted map has a certified inverse."""
    GR = nu.algebra.group_ring()
    for M in lifted_map(nu).values():
        if M.shape[0] != M.shape[1]:
            return False
        if M.size and certify_invertible(M, GR) is None:
            return False
    return True


# ---------------------------------------------------------------- shriek regrading

def shriek_reindex(X: TwistedComplex, m_src_dim: int, n_tgt_dim: int) -> TwistedComplex:
    """Regrade a complex on the target Y of phi: X -> Y for wrong-way maps.

    With [x'] = |x'| + m on Y and [y] = |y| + n on X, subtracting n from both
    keeps X's grading and shifts Y's by m - n, so a shriek cocycle
    Y -> X becomes an ordinary degree-preserving continuation cocycle.
    """
    return X.regraded(m_src_dim - n_tgt_dim)


def shriek_reindex_basis(C: CriticalBasis, m_src_dim: int, n_tgt_dim: int) -> CriticalBasis:
    return C.regraded(m_src_dim - n_tgt_dim)
