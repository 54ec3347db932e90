"""Spectral sequence of the index filtration F_p = sum_{|x| <= p} F (x) x.

Pages are computed over a field with the usual subquotients

    Z^r_p = {c in F_p : dc in F_{p-r}}
    E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1})

degree by degree; d^r sends the class of c to the class of dc and has
bidegree (-r, r-1).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complexes import ChainComplex
from .errors import FieldRequired, InvariantBreach
from .groups import GroupRing
from .linalg import (complement_in, hstack, independent_columns, is_zero_matrix, matmul, nullspace,
                     rank, solve, subspace_sum, zeros)
from .scalars import QQ, ZZ, GF, LaurentRing, Ring
from .twisted import Diagnostic, Representation, local_coefficient_homology


@dataclass
class FilteredComplex:
    complex: ChainComplex
    levels: dict  # degree -> list of filtration levels, aligned with the basis
    preserves_levels: bool = False

    @property
    def level_set(self):
        return sorted({p for lv in self.levels.values() for p in lv})


def canonical_filtration(X) -> FilteredComplex:
    """Filter by critical-point index and certify that d never raises the level."""
    levels = {k: [X.levels[lab] for lab in X.labels(k)] for k in X.degrees}
    preserves = True
    for k in X.degrees:
        M = X.matrix(k)
        src, tgt = levels[k], levels.get(k + X.step, [])
        for (i, j), v in np.ndenumerate(M):
            if v != 0:
                if tgt[i] > src[j]:
                    raise InvariantBreach(f"differential raises the filtration in degree {k}")
                if tgt[i] != src[j]:
                    preserves = False
    return FilteredComplex(X, levels, preserves)


@dataclass
class SpectralPage:
    r: int
    dims: dict                   # (p, q) -> dimension
    reps: dict = field(default_factory=dict)   # (p, q) -> columns in C_{p+q} coordinates
    d: dict = field(default_factory=dict)      # (p, q) -> matrix of d^r out of (p, q)
    stable: bool = False

    def support(self):
        return sorted(pq for pq, n in self.dims.items() if n)

    def dim(self, p, q):
        return self.dims.get((p, q), 0)

    def d_rank(self, p, q, field: Ring):
        M = self.d.get((p, q))
        return 0 if M is None or 0 in M.shape else rank(M, field)

    def total(self, k):
        return sum(n for (p, q), n in self.dims.items() if p + q == k)


class SpectralSequence(list):
    """Pages E^0 .. E^rmax, plus E^infinity and the field used."""

    def __init__(self, pages, infinity: SpectralPage, field: Ring, homology_dims: dict):
        super().__init__(pages)
        self.infinity = infinity
        self.field = field
        self.homology_dims = homology_dims


def _field_complex(X: ChainComplex, field: Ring) -> ChainComplex:
    if isinstance(X.ring, (GroupRing, LaurentRing)):
        raise FieldRequired(f"pages need plain field scalars, not {X.ring.name}")
    if not field.is_field:
        raise FieldRequired(f"{field.name} is not a field")
    if X.ring == field:
        return X
    if X.ring != ZZ:
        raise FieldRequired(f"cannot change scalars from {X.ring.name} to {field.name}")
    return X.map_ring(field, field.coerce)


class _Engine:
    def __init__(self, FC: FilteredComplex, field: Ring):
        self.X = _field_complex(FC.complex, field)
        self.K = field
        self.levels = FC.levels
        ls = FC.level_set
        self.pmin, self.pmax = (ls[0], ls[-1]) if ls else (0, 0)
        self._z = {}

    def filt(self, k, p):
        """Basis of F_p C_k as coordinate columns."""
        lv = self.levels.get(k, [])
        idx = [i for i, l in enumerate(lv) if l <= p]
        n = len(lv)
        B = zeros(self.K, n, len(idx))
        for c, i in enumerate(idx):
            B[i, c] = self.K.one
        return B

    def Z(self, k, p, r):
        key = (k, p, r)
        if key not in self._z:
            Fp = self.filt(k, p)
            if r <= 0 or Fp.shape[1] == 0:
                self._z[key] = Fp
            else:
                D = matmul(self.X.matrix(k), Fp, self.K)
                lv = self.levels.get(k - 1, [])
                high = [i for i, l in enumerate(lv) if l > p - r]
                N = nullspace(D[high, :], self.K) if high else None
                self._z[key] = Fp if N is None else matmul(Fp, N, self.K)
        return self._z[key]

    def denominator(self, k, p, r):
        n = self.X.dim(k)
        A = self.Z(k, p - 1, r - 1)
        src = self.Z(k + 1, p + r - 1, r - 1)
        B = matmul(self.X.matrix(k + 1), src, self.K) if src.shape[1] else zeros(self.K, n, 0)
        return subspace_sum(A, B, self.K, n)

    def page(self, r):
        dims, reps, dens = {}, {}, {}
        for k in self.X.degrees:
            n = self.X.dim(k)
            for p in range(self.pmin, self.pmax + 1):
                Zr = self.Z(k, p, r)
                Den = self.denominator(k, p, r)
                Q = complement_in(Zr, Den, self.K, n)
                dims[(p, k - p)] = Q.shape[1]
                reps[(p, k - p)] = Q
                dens[(p, k - p)] = Den
        d = {}
        for (p, q), Q in reps.items():
            if Q.shape[1] == 0:
                continue
            k = p + q
            tgt = (p - r, q + r - 1)
            T = reps.get(tgt)
            if T is None or T.shape[1] == 0:
                continue
            img = matmul(self.X.matrix(k), Q, self.K)
            basis = hstack([dens[tgt], T], self.K, self.X.dim(k - 1))
            coords = solve(basis, img, self.K)
            if coords is None:
                raise InvariantBreach(f"d^{r} of a class at {(p, q)} leaves Z^{r}")
            d[(p, q)] = coords[dens[tgt].shape[1]:, :]
        return SpectralPage(r, dims, reps, d)


def compute_pages(FC: FilteredComplex, r_max: int, field: Ring = QQ) -> SpectralSequence:
    """Pages E^0 .. E^r_max over a field, certified page by page.

    Checks: d^r d^r = 0, E^{r+1} is the homology of (E^r, d^r), and the
    total dimension of E^infinity in each degree equals dim H_k.
    """
    if r_max < 2:
        raise ValueError("r_max must be at least 2")
    eng = _Engine(FC, field)
    K = eng.K
    last = max(r_max, eng.pmax - eng.pmin + 1)
    pages = [eng.page(r) for r in range(last + 1)]
    for pg in pages:
        for (p, q), M in pg.d.items():
            tgt = (p - pg.r, q + pg.r - 1)
            nxt = pg.d.get(tgt)
            if nxt is not None and not is_zero_matrix(matmul(nxt, M, K)):
                raise InvariantBreach(f"d^{pg.r} d^{pg.r} != 0 at {(p, q)}")
    for pg, nxt in zip(pages, pages[1:]):
        for (p, q), n in pg.dims.items():
            out = pg.d_rank(p, q, K)
            src = (p + pg.r, q - pg.r + 1)
            inc = pg.d_rank(*src, K) if src in pg.dims else 0
            if nxt.dim(p, q) != n - out - inc:
                raise InvariantBreach(f"E^{pg.r + 1} at {(p, q)} is not the homology of E^{pg.r}")
    infinity = pages[-1]
    for pg in pages:
        pg.stable = all(not any(v != 0 for v in M.flat) for later in pages[pg.r:] for M in later.d.values()) \
            and pg.dims == infinity.dims
    X = eng.X
    hdims = {}
    for k in X.degrees:
        n = X.dim(k)
        hdims[k] = n - rank(X.matrix(k), K) - rank(X.matrix(k + 1), K)
        if infinity.total(k) != hdims[k]:
            raise InvariantBreach(f"E^infinity in degree {k} has dimension {infinity.total(k)}, H_k has {hdims[k]}")
    return SpectralSequence(pages[:r_max + 1], infinity, K, hdims)


# ---------------------------------------------------------------- E^2 cross-check

def fiber_homology_representation(F, q: int, field: Ring) -> Representation:
    """H_q(F; field) with the induced action of the group generators."""
    R = F.algebra
    K = field
    basis = F.in_degree(q)
    n = len(basis)

    def dmat(deg):
        src, tgt = F.in_degree(deg), F.in_degree(deg + F.step)
        M = zeros(K, len(tgt), len(src))
        for j, a in enumerate(src):
            for b, c in F.d(F.gen(a)).terms:
                M[tgt.index(b), j] = K.coerce(c)
        return M

    Zq = nullspace(dmat(q), K) if n else zeros(K, 0, 0)
    Din = dmat(q - F.step)
    Bq = independent_columns(Din, K) if Din.shape[1] else zeros(K, n, 0)
    H = complement_in(Zq, Bq, K, n)
    h = H.shape[1]
    mats = {}
    G = R.group
    gens = G.generators if G is not None else ()
    for g in gens:
        rho = F.generator_matrix(g, q)
        rhoK = zeros(K, n, n)
        for idx, v in np.ndenumerate(rho):
            rhoK[idx] = K.coerce(v)
        # column vectors transform by rho^T under the right action v -> v rho
        img = matmul(rhoK.T.copy(), H, K)
        coords = solve(hstack([Bq, H], K, n), img, K)
        if coords is None:
            raise InvariantBreach("group action does not preserve cycles")
        C = coords[Bq.shape[1]:, :]          # column i = image of class i
        mats[g] = [[C[j, i] for j in range(h)] for i in range(h)]
    return Representation(G, K, h, mats, f"H{q}({F.name})")


def e2_cross_check(pages, F, L: ChainComplex, field: Ring | None = None) -> Diagnostic:
    """Compare dim E^2_{p,q} with dim H_p(L; H_q(F)) for every (p, q)."""
    K = field or getattr(pages, "field", QQ)
    E2 = pages[2]
    diag = Diagnostic(subject="E2 cross-check")
    qs = sorted(set(F.degrees) | {q for (_, q) in E2.dims})
    ps = sorted(set(L.degrees) | {p for (p, _) in E2.dims})
    for q in qs:
        if F.in_degree(q):
            M = fiber_homology_representation(F, q, K)
            H = local_coefficient_homology(M, L, K) if M.rank else None
        else:
            H = None
        for p in ps:
            want = H.free_rank(p) if H is not None else 0
            got = E2.dim(p, q)
            if want != got:
                diag.fail("e2", (p, q), f"E2 has {got}, local coefficients give {want}")
    return diag
