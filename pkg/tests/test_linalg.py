import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ as SZZ
from sympy.matrices.normalforms import invariant_factors

from dgmorse.algebra import DGAPresentation
from dgmorse.errors import UnsupportedRing
from dgmorse.groups import FreeAbelianGroup
from dgmorse.linalg import (as_matrix, determinant, is_invertible, matmul, matrix_inverse, identity, rank,
                            smith_normal_form)
from dgmorse.scalars import GF, QQ, ZZ, Laurent, LaurentRing

from oracles import determinantal_invariants


def snf_diagonal(rows, ring=ZZ):
    A = as_matrix(rows, ring)
    return [ring.coerce(d) for d in smith_normal_form(A, ring).diagonal]


def cofactor_det(M, ring):
    n = M.shape[0]
    if n == 0:
        return ring.one
    total = ring.zero
    for j in range(n):
        if M[0, j] != 0:
            minor = np.delete(np.delete(M, 0, axis=0), j, axis=1)
            term = ring.coerce(M[0, j]) * cofactor_det(minor, ring)
            total = total + term if j % 2 == 0 else total - term
    return total


def det(M, ring):
    return determinant(M, ring) if ring in (ZZ, QQ) or ring.is_field else cofactor_det(M, ring)


def check_roundtrip(A, ring):
    f = smith_normal_form(A, ring)
    assert (matmul(matmul(f.U, A, ring), f.V, ring) == f.S).all()
    assert ring.is_unit(det(f.U, ring)) and ring.is_unit(det(f.V, ring))
    assert (matmul(f.U, f.U_inv, ring) == identity(ring, A.shape[0])).all()
    assert (matmul(f.V, f.V_inv, ring) == identity(ring, A.shape[1])).all()
    m, n = f.S.shape
    for i in range(m):
        for j in range(n):
            if i != j:
                assert f.S[i, j] == 0
    d = f.diagonal
    for a, b in zip(d, d[1:]):
        assert ring.divmod(b, a)[1] == 0
    return f


@pytest.mark.parametrize("rows,want", [
    ([[2, 0], [0, 3]], [1, 6]),
    ([[2, 4], [6, 8]], [2, 4]),
    ([[0, 0], [0, 0]], []),
    ([[4, 6, 8]], [2]),
])
def test_integer_snf_examples(rows, want):
    assert snf_diagonal(rows) == want
    assert want == determinantal_invariants(rows)


def test_laurent_snf_is_unit_normalized():
    K = LaurentRing(QQ)
    t = K.monomial(1)
    A = as_matrix([[K.one - t]], K)
    f = check_roundtrip(A, K)
    (d,) = f.diagonal
    assert d.low == 0 and d.coefficient(0) == 1 and d == K.one - t

    B = as_matrix([[K.one - t * t, K.zero], [K.zero, K.one - t * t * t]], K)
    f = check_roundtrip(B, K)
    assert f.diagonal[0] == K.one - t


def test_field_snf_has_unit_diagonal():
    A = as_matrix([[2, 4], [6, 8], [1, 1]], QQ)
    f = check_roundtrip(A, QQ)
    assert f.diagonal == [1, 1]
    f = check_roundtrip(as_matrix([[1, 2], [2, 4]], GF(5)), GF(5))
    assert f.rank == 1


def test_integer_laurent_snf_is_refused():
    R = DGAPresentation([], (0, 0), group=FreeAbelianGroup(["t"]))
    GR = R.group_ring()
    with pytest.raises(UnsupportedRing, match="not a PID"):
        smith_normal_form(as_matrix([[GR.one]], GR), GR)
    R2 = DGAPresentation([], (0, 0), group=FreeAbelianGroup(["t", "s"]))
    GR2 = R2.group_ring()
    with pytest.raises(UnsupportedRing, match="ℤ\\[ℤ²\\]"):
        smith_normal_form(as_matrix([[GR2.one]], GR2), GR2)


def test_inverse_and_rank():
    A = as_matrix([[2, 1], [1, 1]], ZZ)
    assert is_invertible(A, ZZ)
    assert (matmul(A, matrix_inverse(A, ZZ), ZZ) == identity(ZZ, 2)).all()
    assert not is_invertible(as_matrix([[2, 0], [0, 1]], ZZ), ZZ)
    assert rank(as_matrix([[1, 2], [2, 4]], QQ), QQ) == 1


matrices = st.integers(1, 6).flatmap(lambda m: st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_integer_snf_against_sympy(rows):
    A = as_matrix(rows, ZZ)
    f = check_roundtrip(A, ZZ)
    oracle = [abs(int(d)) for d in invariant_factors(Matrix(rows), domain=SZZ) if d != 0]
    assert [int(d) for d in f.diagonal] == oracle


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3))
def test_integer_snf_against_determinantal_divisors(rows):
    assert [int(d) for d in smith_normal_form(as_matrix(rows, ZZ), ZZ).diagonal] == determinantal_invariants(rows)


laurent_entries = st.dictionaries(st.integers(-2, 2), st.integers(-3, 3), max_size=3)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(laurent_entries, min_size=2, max_size=2), min_size=2, max_size=3))
def test_laurent_snf_roundtrip(rows):
    K = LaurentRing(QQ)
    A = np.array([[Laurent(d, QQ) for d in row] for row in rows], dtype=object)
    check_roundtrip(A, K)
