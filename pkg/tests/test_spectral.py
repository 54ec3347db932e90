import pytest

from dgmorse.corpus import load_example
from dgmorse.errors import FieldRequired
from dgmorse.linalg import is_zero_matrix, matmul
from dgmorse.scalars import GF, QQ, ZZ
from dgmorse.spectral import canonical_filtration, compute_pages, e2_cross_check
from dgmorse.twisted import CocycleMatrix, Representation, build_twisted_complex, lifted_complex, local_coefficient_homology

import oracles


def hopf_pages(rmax=3, field=QQ):
    b = load_example("hopf")
    return b, compute_pages(canonical_filtration(b.complex("fiber")), rmax, field)


def test_canonical_filtration_levels(corpus):
    for b in corpus.values():
        for tag, (kind, _) in b.coefficients.items():
            if kind == "module":
                FC = canonical_filtration(b.complex(tag, b.default_cocycle))
                assert set(FC.level_set) <= set(range(b.dim + 1))
    b = load_example("hopf")
    assert canonical_filtration(b.complex("fiber")).level_set == [0, 2]


def test_zero_cocycle_preserves_levels_and_collapses_at_e1():
    b = load_example("hopf")
    C = b.cocycle("m").source
    X = build_twisted_complex(b.modules["fiber"], C, CocycleMatrix("twisting", C, C, {}, b.dga))
    FC = canonical_filtration(X)
    assert FC.preserves_levels
    ss = compute_pages(FC, 3, QQ)
    assert ss[1].stable
    assert ss[1].dims == ss.infinity.dims


def test_hopf_pages():
    _, ss = hopf_pages()
    assert ss[2].support() == [(0, 0), (0, 1), (2, 0), (2, 1)]
    assert all(ss[2].dim(p, q) == 1 for p, q in ss[2].support())
    assert ss[2].d_rank(2, 0, QQ) == 1
    assert ss[3].support() == [(0, 0), (2, 1)]
    assert ss[3].stable and ss[3].dims == ss.infinity.dims
    assert ss.homology_dims == {0: 1, 1: 0, 2: 0, 3: 1}


def test_pages_over_a_prime_field():
    _, ss = hopf_pages(field=GF(3))
    assert ss[3].support() == [(0, 0), (2, 1)]


def test_page_differentials_square_to_zero(corpus):
    for b in corpus.values():
        for tag, (kind, _) in b.coefficients.items():
            if kind != "module":
                continue
            ss = compute_pages(canonical_filtration(b.complex(tag, b.default_cocycle)), 3, QQ)
            for pg in ss:
                for (p, q), M in pg.d.items():
                    nxt = pg.d.get((p - pg.r, q + pg.r - 1))
                    if nxt is not None:
                        assert is_zero_matrix(matmul(nxt, M, QQ))
            for k, n in ss.homology_dims.items():
                assert ss.infinity.total(k) == n


def test_laurent_coefficients_need_a_field():
    b = load_example("circle")
    with pytest.raises(FieldRequired):
        compute_pages(canonical_filtration(b.complex("loop-Q")), 2, QQ)
    with pytest.raises(FieldRequired):
        compute_pages(canonical_filtration(b.complex("Z-trivial")), 2, ZZ)


def test_e2_cross_check_on_hopf():
    b, ss = hopf_pages()
    m = b.cocycle("m")
    d = e2_cross_check(ss, b.modules["fiber"], lifted_complex(m.source, m, b.dga))
    assert d.ok


def test_torus_trivial_coefficients_collapse():
    b = load_example("torus2")
    ss = compute_pages(canonical_filtration(b.complex("Z-trivial")), 2, QQ)
    want = oracles.field_homology_dims(*oracles.TORUS)
    assert {p: ss[2].dim(p, 0) for p in range(3)} == want
    assert ss[2].stable
    m = b.cocycle("m")
    assert e2_cross_check(ss, b.modules["triv"], lifted_complex(m.source, m, b.dga, QQ)).ok


def test_klein_sign_row():
    b = load_example("klein")
    ss = compute_pages(canonical_filtration(b.complex("Z-orientation")), 2, QQ)
    m = b.cocycle("m")
    L = lifted_complex(m.source, m, b.dga)
    w = Representation(b.dga.group, QQ, 1, {"a": [[1]], "b": [[-1]]})
    H = local_coefficient_homology(w, L, QQ)
    oracle = oracles.field_homology_dims(*oracles.KLEIN_ORIENT)
    assert {p: ss[2].dim(p, 0) for p in range(3)} == {p: H.free_rank(p) for p in range(3)} == oracle
    assert e2_cross_check(ss, b.modules["orient"], L).ok
