"""Exact matrices as numpy object arrays: products, inverses, Smith normal form,
and subspace arithmetic over fields.

Matrices act on column vectors.  For free modules over a noncommutative group
ring, maps are left-linear and a matrix D stores f(e_x) = sum_y D[y, x] e_y;
`compose` multiplies in the order that convention requires.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UnsupportedRing
from .groups import FreeAbelianGroup, GroupRing
from .scalars import QQ, ZZ, Ring


def zeros(ring: Ring, m: int, n: int) -> np.ndarray:
    M = np.empty((m, n), dtype=object)
    M.fill(ring.zero)
    return M


def identity(ring: Ring, n: int) -> np.ndarray:
    M = zeros(ring, n, n)
    for i in range(n):
        M[i, i] = ring.one
    return M


def as_matrix(rows, ring: Ring) -> np.ndarray:
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    M = zeros(ring, m, n)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            M[i, j] = ring.coerce(v)
    return M


def matmul(A: np.ndarray, B: np.ndarray, ring: Ring) -> np.ndarray:
    """Plain product A @ B with ring-typed zeros (entries multiply as A[i,k]*B[k,j])."""
    m, k = A.shape
    k2, n = B.shape
    if k != k2:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    C = zeros(ring, m, n)
    for i in range(m):
        for j in range(n):
            s = ring.zero
            for t in range(k):
                a = A[i, t]
                if a != 0:
                    b = B[t, j]
                    if b != 0:
                        s = s + a * b
            C[i, j] = s
    return C


def compose(outer: np.ndarray, inner: np.ndarray, ring: Ring) -> np.ndarray:
    """Matrix of outer o inner.  Equals outer @ inner for commutative rings."""
    if ring.commutative:
        return matmul(outer, inner, ring)
    return matmul(inner.T, outer.T, ring).T.copy()


def is_zero_matrix(A: np.ndarray) -> bool:
    return all(v == 0 for v in A.flat)


def first_nonzero(A: np.ndarray):
    for (i, j), v in np.ndenumerate(A):
        if v != 0:
            return (i, j), v
    return None


def hstack(blocks, ring: Ring, rows: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return zeros(ring, rows, 0)
    return np.concatenate(blocks, axis=1)


def vstack(blocks, ring: Ring, cols: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[0]]
    if not blocks:
        return zeros(ring, 0, cols)
    return np.concatenate(blocks, axis=0)


def map_entries(A: np.ndarray, f, ring: Ring) -> np.ndarray:
    B = zeros(ring, *A.shape)
    for idx, v in np.ndenumerate(A):
        B[idx] = f(v)
    return B


# ---------------------------------------------------------------- inverses

def _fraction_field(ring: Ring) -> Ring:
    return QQ if ring == ZZ else ring


def matrix_inverse(A: np.ndarray, ring: Ring) -> np.ndarray:
    """Inverse over ZZ, QQ or GF(p); ValueError if A is not invertible over `ring`."""
    n, m = A.shape
    if n != m:
        raise ValueError("only square matrices are invertible")
    K = _fraction_field(ring)
    if not K.is_field:
        raise UnsupportedRing(f"matrix inversion over {ring.name}")
    M = [[K.coerce(A[i, j]) for j in range(n)] + [K.one if i == j else K.zero for j in range(n)]
         for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ValueError("singular matrix")
        M[c], M[p] = M[p], M[c]
        inv = K.unit_inverse(M[c][c])
        M[c] = [v * inv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    out = zeros(ring, n, n)
    for i in range(n):
        for j in range(n):
            v = M[i][n + j]
            if ring == ZZ:
                if Fraction(v).denominator != 1:
                    raise ValueError("matrix is not invertible over ZZ")
                v = int(v)
            out[i, j] = v
    return out


def is_invertible(A: np.ndarray, ring: Ring) -> bool:
    try:
        matrix_inverse(A, ring)
    except ValueError:
        return False
    return True


def determinant(A: np.ndarray, ring: Ring):
    """Determinant over ZZ, QQ or GF(p) by fraction-field elimination."""
    n = A.shape[0]
    K = _fraction_field(ring)
    M = [[K.coerce(A[i, j]) for j in range(n)] for i in range(n)]
    det = K.one
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return ring.zero
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det = det * M[c][c]
        inv = K.unit_inverse(M[c][c])
        for r in range(c + 1, n):
            if M[r][c] != 0:
                f = M[r][c] * inv
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return ring.coerce(det) if ring != ZZ else int(det)


# ---------------------------------------------------------------- Smith normal form

@dataclass
class SmithForm:
    """U @ A @ V = S, with U_inv, V_inv the exact inverses of U, V."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    V_inv: np.ndarray
    rank: int
    ring: Ring

    @property
    def diagonal(self):
        return [self.S[i, i] for i in range(self.rank)]


def check_euclidean(ring: Ring):
    if isinstance(ring, GroupRing):
        g = ring.group
        if isinstance(g, FreeAbelianGroup) and g.rank == 1:
            raise UnsupportedRing(f"unsupported ring {ring.pretty()}: integer Laurent polynomials "
                                  "are not a PID; use field scalars")
        raise UnsupportedRing(f"unsupported ring {ring.pretty()}")
    if not ring.is_euclidean:
        raise UnsupportedRing(f"unsupported ring {ring.name}")


def smith_normal_form(A: np.ndarray, ring: Ring) -> SmithForm:
    """Smith normal form over a Euclidean ring (ZZ, QQ, GF(p), k[t, t^-1]).

    Pivots are chosen with minimal norm, ties broken by (row, column) order,
    so the result is deterministic.  Diagonal entries are unit-normalized and
    each divides the next.
    """
    check_euclidean(ring)
    m, n = A.shape
    S = [[ring.coerce(A[i, j]) for j in range(n)] for i in range(m)]
    U = identity(ring, m)
    Ui = identity(ring, m)
    V = identity(ring, n)
    Vi = identity(ring, n)
    norm, dm, zero = ring.norm, ring.divmod, ring.zero

    def add_row(i, t, c):  # row_i += c * row_t
        S[i] = [a + c * b for a, b in zip(S[i], S[t])]
        U[i, :] = [a + c * b for a, b in zip(U[i, :], U[t, :])]
        Ui[:, t] = [a - c * b for a, b in zip(Ui[:, t], Ui[:, i])]

    def swap_rows(i, t):
        S[i], S[t] = S[t], S[i]
        U[[i, t], :] = U[[t, i], :]
        Ui[:, [i, t]] = Ui[:, [t, i]]

    def add_col(j, t, c):  # col_j += c * col_t
        for row in S:
            row[j] = row[j] + c * row[t]
        V[:, j] = [a + c * b for a, b in zip(V[:, j], V[:, t])]
        Vi[t, :] = [a - c * b for a, b in zip(Vi[t, :], Vi[j, :])]

    def swap_cols(j, t):
        for row in S:
            row[j], row[t] = row[t], row[j]
        V[:, [j, t]] = V[:, [t, j]]
        Vi[[j, t], :] = Vi[[t, j], :]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = S[i][j]
                if v != 0:
                    key = (norm(v), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)
        while True:
            # move the smallest entry of row t / column t to the pivot, then clear
            # the column and the row; any nonzero remainder restarts the pass
            cand = [(norm(S[i][t]), 0, i) for i in range(t, m) if S[i][t] != 0]
            cand += [(norm(S[t][j]), 1, j) for j in range(t + 1, n) if S[t][j] != 0]
            _, axis, k = min(cand)
            if axis == 0 and k != t:
                swap_rows(k, t)
            elif axis == 1:
                swap_cols(k, t)
            clean = True
            for i in range(t + 1, m):
                if S[i][t] != 0:
                    q, _ = dm(S[i][t], S[t][t])
                    add_row(i, t, -q)
                    clean = clean and S[i][t] == 0
            if not clean:
                continue
            for j in range(t + 1, n):
                if S[t][j] != 0:
                    q, _ = dm(S[t][j], S[t][t])
                    add_col(j, t, -q)
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = None
            p = S[t][t]
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] != 0 and dm(S[i][j], p)[1] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, ring.one)
        _, u = ring.normalize(S[t][t])
        if u != ring.one:
            S[t] = [u * a for a in S[t]]
            U[t, :] = [u * a for a in U[t, :]]
            ui = ring.unit_inverse(u)
            Ui[:, t] = [a * ui for a in Ui[:, t]]
        t += 1
    Sm = zeros(ring, m, n)
    for i in range(m):
        for j in range(n):
            Sm[i, j] = S[i][j]
    rank = sum(1 for i in range(min(m, n)) if S[i][i] != 0)
    return SmithForm(U, Sm, V, Ui, Vi, rank, ring)


def invariant_factors(A: np.ndarray, ring: Ring):
    return smith_normal_form(A, ring).diagonal


def rank(A: np.ndarray, ring: Ring) -> int:
    if 0 in A.shape:
        return 0
    if ring.is_field:
        return len(rref(A, ring)[1])
    return smith_normal_form(A, ring).rank


# ---------------------------------------------------------------- field linear algebra

def rref(A: np.ndarray, field: Ring):
    """Reduced row echelon form and pivot columns, over a field."""
    m, n = A.shape
    M = [[field.coerce(A[i, j]) for j in range(n)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = field.unit_inverse(M[r][c])
        M[r] = [v * inv for v in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    out = zeros(field, m, n)
    for i in range(m):
        for j in range(n):
            out[i, j] = M[i][j]
    return out, pivots


def nullspace(A: np.ndarray, field: Ring) -> np.ndarray:
    """Columns spanning ker A (one per free column of the rref)."""
    m, n = A.shape
    R, pivots = rref(A, field) if m else (zeros(field, 0, n), [])
    free = [c for c in range(n) if c not in pivots]
    N = zeros(field, n, len(free))
    for k, f in enumerate(free):
        N[f, k] = field.one
        for i, p in enumerate(pivots):
            N[p, k] = -R[i, f]
    return N


def independent_columns(A: np.ndarray, field: Ring) -> np.ndarray:
    """A basis of the column space, chosen among A's columns (leftmost first)."""
    if A.shape[1] == 0:
        return A
    _, pivots = rref(A, field)
    return A[:, pivots]


def subspace_sum(A, B, field, dim):
    return independent_columns(hstack([A, B], field, dim), field)


def subspace_intersection(A, B, field, dim):
    """Basis of span(A) & span(B), for A, B with independent columns."""
    if A.shape[1] == 0 or B.shape[1] == 0:
        return zeros(field, dim, 0)
    N = nullspace(hstack([A, -B], field, dim), field)
    return independent_columns(matmul(A, N[:A.shape[1], :], field), field)


def solve(A: np.ndarray, b: np.ndarray, field: Ring):
    """Some x with A x = b (b a column matrix), or None."""
    m, n = A.shape
    aug = hstack([A, b], field, m)
    R, pivots = rref(aug, field)
    if n in pivots:
        return None
    x = zeros(field, n, b.shape[1])
    for i, p in enumerate(pivots):
        for k in range(b.shape[1]):
            x[p, k] = R[i, n + k]
    return x


def complement_in(U: np.ndarray, W: np.ndarray, field: Ring, dim: int) -> np.ndarray:
    """Columns of U completing a basis of span(W) to one of span(W) + span(U)."""
    if U.shape[1] == 0:
        return U
    aug = hstack([W, U], field, dim)
    _, pivots = rref(aug, field)
    k = W.shape[1]
    chosen = [p - k for p in pivots if p >= k]
    return U[:, chosen]
