"""Free based (co)chain complexes and their homology with certificates.

A complex stores, per degree k, an ordered list of basis labels and the matrix
of the differential leaving degree k (k -> k + step, step = -1 for chain
complexes and +1 for cochain complexes).
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DSquaredNonzero, InvariantBreach, UnsupportedRing
from .groups import FreeAbelianGroup, GroupRing
from .linalg import compose, is_zero_matrix, matmul, smith_normal_form, zeros
from .scalars import LaurentRing, Ring

WORKERS_ENV = "DGMORSE_WORKERS"


class ChainComplex:
    def __init__(self, ring: Ring, basis: dict, diff: dict, step: int = -1, name: str = ""):
        self.ring = ring
        self.step = step
        self.name = name
        self.basis = {k: list(v) for k, v in basis.items() if v}
        self.diff = {}
        for k, labels in self.basis.items():
            tgt = len(self.basis.get(k + step, []))
            M = diff.get(k)
            if M is None:
                M = zeros(ring, tgt, len(labels))
            if M.shape != (tgt, len(labels)):
                raise InvariantBreach(f"differential in degree {k} has shape {M.shape}, "
                                      f"expected {(tgt, len(labels))}")
            self.diff[k] = M

    @property
    def degrees(self):
        return sorted(self.basis)

    def dim(self, k) -> int:
        return len(self.basis.get(k, []))

    def labels(self, k):
        return self.basis.get(k, [])

    def matrix(self, k) -> np.ndarray:
        """Differential leaving degree k."""
        if k in self.diff:
            return self.diff[k]
        return zeros(self.ring, self.dim(k + self.step), self.dim(k))

    def index(self, k, label) -> int:
        return self.basis[k].index(label)

    def check_d_squared(self):
        """Raise DSquaredNonzero unless every composite of consecutive differentials vanishes."""
        for k in self.degrees:
            D2 = compose(self.matrix(k + self.step), self.matrix(k), self.ring)
            for (i, j), v in np.ndenumerate(D2):
                if v != 0:
                    raise DSquaredNonzero(k, self.basis[k][j], residual=v)
        return True

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * self.dim(k) for k in self.degrees)

    def map_ring(self, ring: Ring, f) -> "ChainComplex":
        diff = {}
        for k, M in self.diff.items():
            N = zeros(ring, *M.shape)
            for idx, v in np.ndenumerate(M):
                N[idx] = f(v)
            diff[k] = N
        return ChainComplex(ring, self.basis, diff, self.step, self.name)

    def regraded(self, shift: int) -> "ChainComplex":
        return ChainComplex(self.ring, {k + shift: v for k, v in self.basis.items()},
                            {k + shift: M for k, M in self.diff.items()}, self.step, self.name)

    def __repr__(self):
        dims = ", ".join(f"{k}:{self.dim(k)}" for k in self.degrees)
        return f"<ChainComplex {self.name} over {self.ring.name} [{dims}]>"


# ---------------------------------------------------------------- homology

@dataclass
class HomologyGroup:
    degree: int
    free_rank: int
    torsion: list
    free_reps: list = field(default_factory=list)
    torsion_reps: list = field(default_factory=list)
    free_detectors: list = field(default_factory=list)
    torsion_detectors: list = field(default_factory=list)
    torsion_witnesses: list = field(default_factory=list)

    @property
    def orders(self):
        """Order of each generator, free generators first (0 means infinite order)."""
        return [0] * self.free_rank + list(self.torsion)

    @property
    def reps(self):
        return self.free_reps + self.torsion_reps

    @property
    def detectors(self):
        return self.free_detectors + self.torsion_detectors

    def is_zero(self):
        return self.free_rank == 0 and not self.torsion


@dataclass
class HomologyResult:
    ring: Ring
    groups: dict
    step: int = -1
    note: str = ""

    def __getitem__(self, k) -> HomologyGroup:
        return self.groups.get(k) or HomologyGroup(k, 0, [])

    @property
    def degrees(self):
        return sorted(self.groups)

    def free_rank(self, k):
        return self[k].free_rank

    def torsion(self, k):
        return self[k].torsion

    def describe(self, k) -> str:
        return describe_group(self.ring, self[k].free_rank, self[k].torsion)

    def table(self, degrees=None) -> dict:
        degs = degrees if degrees is not None else self.degrees
        return {k: self.describe(k) for k in degs}

    def field_dimension(self, k):
        """Dimension over the base field (None when infinite)."""
        g = self[k]
        if isinstance(self.ring, LaurentRing):
            if g.free_rank:
                return None
            return sum(f.span() for f in g.torsion)
        if self.ring.is_field:
            return g.free_rank
        raise ValueError("field dimension needs field or Laurent scalars")

    def nonzero_degrees(self):
        return [k for k in self.degrees if not self[k].is_zero()]


def ring_label(ring: Ring) -> str:
    if isinstance(ring, LaurentRing):
        return f"{ring_label(ring.field)}[{ring.var}^+-1]"
    return {"ZZ": "Z", "QQ": "Q"}.get(ring.name, ring.name)


def describe_group(ring: Ring, free_rank: int, torsion) -> str:
    base = ring_label(ring)
    parts = []
    if free_rank:
        parts.append(base if free_rank == 1 else f"{base}^{free_rank}")
    for d in torsion:
        parts.append(f"{base}/{ring.render(d)}" if not isinstance(ring, LaurentRing)
                     else f"{base}/({ring.render(d)})")
    return " + ".join(parts) if parts else "0"


def _degree_homology(args):
    ring, k, D_out, D_in = args
    n = D_out.shape[1]
    if n == 0:
        return HomologyGroup(k, 0, [])
    snf_out = smith_normal_form(D_out, ring)
    r = snf_out.rank
    K = snf_out.V[:, r:]
    Vi_ker = snf_out.V_inv[r:, :]
    A = matmul(Vi_ker, D_in, ring)
    snf_in = smith_normal_form(A, ring)
    r2 = snf_in.rank
    diag = snf_in.diagonal
    gens = matmul(K, snf_in.U_inv, ring)
    dets = matmul(snf_in.U, Vi_ker, ring)
    g = HomologyGroup(k, 0, [])
    for i in range(gens.shape[1]):
        col = gens[:, i].copy()
        det = dets[i, :].copy()
        if i < r2:
            d = diag[i]
            if ring.is_unit(d):
                continue
            g.torsion.append(d)
            g.torsion_reps.append(col)
            g.torsion_detectors.append(det)
            g.torsion_witnesses.append(snf_in.V[:, i].copy())
        else:
            g.free_rank += 1
            g.free_reps.append(col)
            g.free_detectors.append(det)
    return g


def _euclidean_homology(X: ChainComplex, workers=None, degrees=None) -> HomologyResult:
    ring = X.ring
    degs = degrees if degrees is not None else X.degrees
    jobs = [(ring, k, X.matrix(k), X.matrix(k - X.step)) for k in degs]
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        workers = int(env) if env else 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            groups = list(pool.map(_degree_homology, jobs))
    else:
        groups = [_degree_homology(j) for j in jobs]
    res = HomologyResult(ring, {g.degree: g for g in groups}, X.step)
    verify_homology(X, res)
    return res


def verify_homology(X: ChainComplex, H: HomologyResult):
    """Re-check every certificate: reps are cycles, detectors separate them from boundaries."""
    ring = X.ring
    for k, g in H.groups.items():
        D_out, D_in = X.matrix(k), X.matrix(k - X.step)
        n = X.dim(k)
        reps, dets, orders = g.reps, g.detectors, g.orders
        for z in reps:
            v = matmul(D_out, z.reshape(n, 1), ring)
            if not is_zero_matrix(v):
                raise InvariantBreach(f"homology representative in degree {k} is not a cycle")
        for i, lam in enumerate(dets):
            for j, z in enumerate(reps):
                val = sum((lam[t] * z[t] for t in range(n)), ring.zero)
                if val != (ring.one if i == j else ring.zero):
                    raise InvariantBreach(f"detector {i} in degree {k} does not separate generator {j}")
            img = matmul(lam.reshape(1, n), D_in, ring)
            d = orders[i]
            for v in img.flat:
                if (d == 0 and v != 0) or (d != 0 and ring.divmod(v, d)[1] != 0):
                    raise InvariantBreach(f"detector {i} in degree {k} does not vanish on boundaries")
        for z, w, d in zip(g.torsion_reps, g.torsion_witnesses, g.torsion):
            lhs = matmul(D_in, w.reshape(-1, 1), ring)
            if any(a != d * b for a, b in zip(lhs.flat, z)):
                raise InvariantBreach(f"torsion witness in degree {k} fails")
    return True


def restrict_scalars(X: ChainComplex) -> ChainComplex:
    """A complex of free Z[G]-modules (G finite) as a complex of free base-ring modules."""
    GR = X.ring
    G = GR.group
    elems = list(G.elements)
    basis = {k: [(lab, g) for lab in labels for g in elems] for k, labels in X.basis.items()}
    diff = {}
    for k in X.degrees:
        M = X.matrix(k)
        tgt = basis.get(k + X.step, [])
        pos = {lab: i for i, lab in enumerate(tgt)}
        N = zeros(GR.base, len(tgt), len(basis[k]))
        for j, (x, g) in enumerate(basis[k]):
            xi = X.basis[k].index(x)
            for yi, y in enumerate(X.basis.get(k + X.step, [])):
                entry = M[yi, xi]
                for h, c in GR.coerce(entry).terms:
                    N[pos[(y, G.mul(g, h))], j] += c
        diff[k] = N
    return ChainComplex(GR.base, basis, diff, X.step, X.name)


def homology(X: ChainComplex, workers=None, degrees=None) -> HomologyResult:
    """Homology over ZZ, a field, or k[t, t^-1]; certified.

    Complexes over a group ring are handled when the group is Z and the scalars
    form a field (Laurent polynomials), or when the group is finite (computed as
    base-ring modules, i.e. the homology of the underlying abelian groups).
    Everything else is refused with UnsupportedRing.
    """
    ring = X.ring
    if isinstance(ring, GroupRing):
        G = ring.group
        if isinstance(G, FreeAbelianGroup) and G.rank == 1 and ring.base.is_field:
            L = ring.laurent_ring(ring.base)
            Y = X.map_ring(L, lambda a: ring.to_laurent(a, ring.base))
            res = _euclidean_homology(Y, workers, degrees)
            res.note = f"as {ring_label(L)}-modules"
            return res
        if G.is_finite:
            res = _euclidean_homology(restrict_scalars(X), workers, degrees)
            res.note = f"as {ring_label(ring.base)}-modules"
            return res
        raise UnsupportedRing(f"unsupported ring {ring.pretty()}")
    if not ring.is_euclidean:
        raise UnsupportedRing(f"unsupported ring {ring.name}")
    return _euclidean_homology(X, workers, degrees)
