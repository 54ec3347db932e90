"""Cohomological twisted complexes, loop inversion of cocycles, sign characters,
orientation systems and chain-level Poincare duality."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, DGAPresentation, DGModulePresentation, GroupElement, sign
from .complexes import ChainComplex, homology
from .errors import (ActionNotGroupFactored, InconsistentCharacter, NoGroupDeclaration, NoInvolution,
                     PairingMismatch, SchemaViolation, ValidationFailed)
from .linalg import identity, zeros
from .morphisms import ChainMap, induced_is_isomorphism
from .twisted import (CocycleMatrix, CriticalBasis, Diagnostic, TwistedComplex, _assemble,
                      check_cohomological_maurer_cartan)


def opposite_grading(F: DGModulePresentation) -> DGModulePresentation:
    """Negate every degree and flip the grading sense; tables are unchanged."""
    sense = "cohomological" if F.sense == "homological" else "homological"
    gens = [(n, -d) for n, d in F.generators]
    name = F.name[:-4] if F.name.endswith("-bar") else F.name + "-bar"
    return DGModulePresentation(F.algebra, gens, F._action_raw, F._diff_raw, sense, name)


def cohomological_cocycle(m: CocycleMatrix, involution=None, check: bool = True) -> CocycleMatrix:
    """mv[y, x] = (-1)^(|x||y| + |x| + 1) I(m[x, y]) on the same critical basis.

    `involution` overrides the DGA's declared one (any callable on elements).
    The cohomological MC relation is re-verified; ValidationFailed carries the
    diagnostic when it fails.
    """
    R = m.algebra
    if involution is None:
        if not R.has_involution:
            raise NoInvolution("the DGA declares no involution")
        involution = R.involute
    C = m.source
    entries = {}
    for (x, y), v in m.entries.items():
        ix, iy = C.index(x), C.index(y)
        entries[(y, x)] = involution(v).scale(sign(ix * iy + ix + 1))
    mv = CocycleMatrix("cotwisting", C, C, entries, R, m.name + "v", m.refs)
    if check:
        diag = check_cohomological_maurer_cartan(C, R, mv)
        if not diag.ok:
            raise ValidationFailed(diag.render(), report=diag)
    return mv


def build_cochain_complex(G: DGModulePresentation, mv: CocycleMatrix, check: bool = True) -> TwistedComplex:
    """G (x) C with d(a (x) x) = da (x) x + (-1)^|a| sum a.mv[x, y] (x) y; d^2 = 0 certified."""
    if G.sense != "cohomological":
        raise SchemaViolation("build_cochain_complex needs a cohomological module")
    if mv.kind != "cotwisting":
        raise SchemaViolation(f"cocycle {mv.name} is {mv.kind}, not cotwisting")
    if check:
        diag = check_cohomological_maurer_cartan(mv.source, mv.algebra, mv)
        if not diag.ok:
            raise ValidationFailed(diag.render(), report=diag)
    X = _assemble(G, mv.source, mv, +1, f"{G.name}(x){mv.source.name}")
    X.check_d_squared()
    return X


# ---------------------------------------------------------------- sign characters

class SignCharacter:
    """A homomorphism G -> {+1, -1} given on generators."""

    def __init__(self, group, signs: dict, name="w"):
        if group is None:
            raise NoGroupDeclaration("a sign character needs a group declaration")
        self.group, self.name = group, name
        self.signs = {}
        for g in group.generators:
            s = int(signs.get(g, 1))
            if s not in (1, -1):
                raise InconsistentCharacter(f"{name}({g}) = {s} is not a sign")
            self.signs[g] = s
        for g in signs:
            if g not in group.generators:
                raise InconsistentCharacter(f"{name} is given on {g}, which is not a group generator")
        for rel in group.relators():
            v = 1
            for g, e in rel:
                v *= self.signs[g] ** abs(e)
            if v != 1:
                word = " ".join(f"{g}^{e}" for g, e in rel)
                raise InconsistentCharacter(f"{name} is not trivial on the relator {word}")

    @classmethod
    def trivial(cls, group):
        return cls(group, {}, "triv")

    def __call__(self, g) -> int:
        v = 1
        for gen, e in self.group.word(g):
            v *= self.signs[gen] ** abs(e)
        return v

    @property
    def is_trivial(self):
        return all(s == 1 for s in self.signs.values())

    def twist(self, x: AlgebraElement) -> AlgebraElement:
        """g -> w(g) g on group elements; named generators are fixed."""
        R = x.algebra
        acc = {k: (c * self(k.value) if isinstance(k, GroupElement) else c) for k, c in x.terms}
        return AlgebraElement(R, acc, x.degree)

    def __repr__(self):
        return f"{self.name}(" + ", ".join(f"{g}: {s:+d}" for g, s in self.signs.items()) + ")"


def orientation_system(R: DGAPresentation, w: SignCharacter, sense: str = "homological") -> DGModulePresentation:
    """Rank-1 module in degree 0: group generators act by their sign, positive degrees by 0."""
    if R.group is None:
        raise NoGroupDeclaration("orientation systems need a group declaration")
    if w.group is not R.group:
        raise InconsistentCharacter("character is declared on a different group")
    action = {("o", g): ("o" if w.signs[g] == 1 else "-o") for g in R.group.generators}
    for a, _ in R.basis.generators:
        action[("o", a)] = "0"
    return DGModulePresentation(R, [("o", 0)], action, {}, sense, name=f"o[{w.name}]")


def twist_by_character(F: DGModulePresentation, w: SignCharacter) -> DGModulePresentation:
    """F (x) (rank-1 sign system): group generators act with an extra sign."""
    R = F.algebra
    if R.group is None:
        raise ActionNotGroupFactored("degree-0 action does not factor through a declared group")
    for a, d in R.basis.generators:
        if d == 0 and a != R.unit_name:
            raise ActionNotGroupFactored(f"degree-0 generator {a} has no declared group image")
    action = dict(F._action_raw)
    for (m, a), raw in F._action_raw.items():
        if a in R.group.generators and w.signs[a] == -1:
            v = F.element(raw)
            action[(m, a)] = repr(-v) if v else "0"
    name = f"{F.name}*{w.name}"
    if F.name.endswith(f"*{w.name}"):
        name = F.name[: -len(w.name) - 1]
    return DGModulePresentation(R, F.generators, action, F._diff_raw, F.sense, name)


# ---------------------------------------------------------------- Poincare duality

def paired_cocycle(m_neg: CocycleMatrix, w: SignCharacter | None = None) -> CocycleMatrix:
    """The cohomological cocycle of f paired with m^{-f}: same entries (sign-twisted by w),
    keyed by the dual critical points."""
    Cv = m_neg.source.dual()
    f = w.twist if w is not None else (lambda v: v)
    entries = {k: f(v) for k, v in m_neg.entries.items()}
    return CocycleMatrix("cotwisting", Cv, Cv, entries, m_neg.algebra, m_neg.name + "-dual")


def check_pairing(m_neg: CocycleMatrix, m_pos: CocycleMatrix, w: SignCharacter | None = None) -> Diagnostic:
    diag = Diagnostic(subject="pairing")
    if [p for p, _ in m_neg.source.points] != [p for p, _ in m_pos.source.points]:
        diag.fail("points", ("-f", "f"), "critical points differ")
        return diag
    n = m_neg.source.dim
    for p, i in m_neg.source.points:
        if m_pos.source.index(p) != n - i:
            diag.fail("index", (p, p), f"index {m_pos.source.index(p)} is not {n} - {i}")
    want = paired_cocycle(m_neg, w)
    for key in sorted(set(want.entries) | set(m_pos.entries)):
        res = m_pos[key] - want[key]
        if res:
            diag.fail("pairing", key, res)
    return diag


@dataclass
class PoincareDuality:
    source: TwistedComplex   # homological, for -f
    target: TwistedComplex   # cohomological, for f
    n: int
    matrices: dict           # k -> matrix from source_k to target^{n-k}
    iso_on_homology: bool | None = None

    def as_chain_map(self) -> ChainMap:
        return ChainMap(self.source, cochains_as_chains(self.target, self.n), self.matrices, 0, "PD")


def cochains_as_chains(Y: ChainComplex, n: int) -> ChainComplex:
    """Read a cochain complex in complementary degree: Y^{n-k} becomes degree k."""
    basis = {n - k: v for k, v in Y.basis.items()}
    diff = {n - k: M for k, M in Y.diff.items()}
    return ChainComplex(Y.ring, basis, diff, -1, Y.name)


def poincare_duality_map(F: DGModulePresentation, m_neg: CocycleMatrix, m_pos: CocycleMatrix,
                         w: SignCharacter | None = None, certify_homology: bool = True) -> PoincareDuality:
    """PD(a (x) x) = a-bar (x) x-dual, certified to be a chain isomorphism.

    Source: twisted complex of (-f, F).  Target: cochain complex of
    (f, F-bar twisted by w).  Raises PairingMismatch unless m_pos is the
    (sign-twisted) regrade of m_neg.
    """
    diag = check_pairing(m_neg, m_pos, w)
    if not diag.ok:
        raise PairingMismatch(diag.render())
    from .twisted import build_twisted_complex
    X = build_twisted_complex(F, m_neg.source, m_neg)
    G = opposite_grading(F)
    if w is not None:
        G = twist_by_character(G, w)
    Y = build_cochain_complex(G, m_pos)
    n = m_neg.source.dim
    mats = {}
    for k in X.degrees:
        src, tgt = X.labels(k), Y.labels(n - k)
        if sorted(map(repr, src)) != sorted(map(repr, tgt)):
            raise PairingMismatch(f"generators of degree {k} and codegree {n - k} do not correspond")
        M = zeros(X.ring, len(tgt), len(src))
        pos = {lab: i for i, lab in enumerate(tgt)}
        for j, lab in enumerate(src):
            M[pos[lab], j] = X.ring.one
        mats[k] = M
    for k in Y.degrees:
        if n - k not in X.basis:
            raise PairingMismatch(f"codegree {k} has no homological partner")
    pd = PoincareDuality(X, Y, n, mats)
    pd.as_chain_map().check()
    if certify_homology:
        pd.iso_on_homology = induced_is_isomorphism(pd.as_chain_map())
    return pd
