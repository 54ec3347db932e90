"""Independent oracles, written without using the dgmorse engine.

Cellular chain complexes are entered by hand as integer matrices and reduced
with sympy; invariant factors are recomputed from determinantal divisors.
"""
from __future__ import annotations

from itertools import combinations
from math import gcd

from sympy import Matrix, Poly, Symbol, ZZ, gcd as poly_gcd
from sympy.matrices.normalforms import invariant_factors

t = Symbol("t")


def describe(free: int, torsion, letter: str = "Z") -> str:
    """Same notation as the engine's reports: 'Z^2 + Z/2', '0', ..."""
    parts = []
    if free == 1:
        parts.append(letter)
    elif free > 1:
        parts.append(f"{letter}^{free}")
    parts += [f"Z/{d}" for d in torsion]
    return " + ".join(parts) or "0"


def integer_homology(dims: dict, boundary: dict) -> dict:
    """H_k of a finite free Z-complex; boundary[k] is the matrix C_k -> C_{k-1}."""
    out = {}
    for k, n in dims.items():
        dk = boundary.get(k)
        dk1 = boundary.get(k + 1)
        rk = Matrix(dk).rank() if dk is not None and n and dims.get(k - 1, 0) else 0
        rk1 = Matrix(dk1).rank() if dk1 is not None and n and dims.get(k + 1, 0) else 0
        torsion = []
        if rk1:
            torsion = [int(abs(d)) for d in invariant_factors(Matrix(dk1), domain=ZZ) if abs(d) > 1]
        out[k] = describe(n - rk - rk1, torsion)
    return out


def integer_cohomology(dims: dict, boundary: dict) -> dict:
    """H^k of Hom(C, Z): the coboundary C^k -> C^{k+1} is the transpose of boundary[k+1]."""
    co = {k + 1: Matrix(M).T for k, M in ((k - 1, M) for k, M in boundary.items())}
    # regrade by negation so that integer_homology (degree -1 differential) applies
    neg_dims = {-k: n for k, n in dims.items()}
    neg_bd = {-(k - 1): M for k, M in co.items()}
    H = integer_homology(neg_dims, neg_bd)
    return {k: H[-k] for k in dims}


def determinantal_invariants(A) -> list:
    """Invariant factors s_k = D_k / D_{k-1}, D_k the gcd of all k x k minors."""
    M = Matrix(A)
    m, n = M.shape
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, int(M.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def laurent_quotient_dimension(*polys) -> int:
    """dim_Q of Q[t, t^-1] / (f_1, ..., f_r): the degree of the gcd with powers of t removed."""
    g = 0
    for f in polys:
        g = poly_gcd(g, f)
    p = Poly(g, t)
    while p.degree() > 0 and p.eval(0) == 0:
        p = Poly(p.as_expr() / t, t)
    return p.degree()


def field_homology_dims(dims: dict, boundary: dict) -> dict:
    """Betti numbers over Q."""
    out = {}
    for k, n in dims.items():
        dk, dk1 = boundary.get(k), boundary.get(k + 1)
        rk = Matrix(dk).rank() if dk is not None and n and dims.get(k - 1, 0) else 0
        rk1 = Matrix(dk1).rank() if dk1 is not None and n and dims.get(k + 1, 0) else 0
        out[k] = n - rk - rk1
    return out


# ---------------------------------------------------------------- hand-entered cellular data
# Each entry: (cells per degree, boundary matrices over Z).

CIRCLE = ({0: 1, 1: 1}, {1: [[0]]})
# Circle with the sign local system: the 1-cell boundary is t - 1 -> -2.
CIRCLE_SIGN = ({0: 1, 1: 1}, {1: [[-2]]})
TORUS = ({0: 1, 1: 2, 2: 1}, {1: [[0, 0]], 2: [[0], [0]]})
RP2 = ({0: 1, 1: 1, 2: 1}, {1: [[0]], 2: [[2]]})
# Projective plane, sign system: g acts by -1, so 1 + g -> 0 and g - 1 -> -2.
RP2_SIGN = ({0: 1, 1: 1, 2: 1}, {1: [[-2]], 2: [[0]]})
# Universal cover S^2 as a free Z-complex of rank 2 per cell (basis 1, g).
RP2_COVER = ({0: 2, 1: 2, 2: 2}, {1: [[-1, 1], [1, -1]], 2: [[1, 1], [1, 1]]})
# Klein bottle, relator a b a b^-1: Fox derivatives 1 + ab and a - 1.
KLEIN = ({0: 1, 1: 2, 2: 1}, {1: [[0, 0]], 2: [[2], [0]]})
# Klein bottle with the orientation character (a -> 1, b -> -1).
KLEIN_ORIENT = ({0: 1, 1: 2, 2: 1}, {1: [[0, -2]], 2: [[0], [0]]})
SPHERE2 = ({0: 1, 1: 0, 2: 1}, {})
SPHERE3 = ({0: 1, 1: 0, 2: 0, 3: 1}, {})
