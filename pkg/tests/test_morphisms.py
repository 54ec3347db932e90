import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dgmorse.complexes import homology
from dgmorse.corpus import load_example
from dgmorse.errors import NotModuleMorphism
from dgmorse.morphisms import (DGAMorphism, ModuleMorphism, check_continuation_cocycle, check_homotopy_cocycle,
                               compose_cocycles, identity_map, induce_chain_map, induce_homotopy,
                               induced_is_isomorphism, induced_on_homology, is_quasi_iso, lifted_map_invertible,
                               mapping_cone, module_morphism_chain_map, pushforward_cocycle, shriek_reindex,
                               shriek_reindex_basis, zero_map)
from dgmorse.twisted import CocycleMatrix


@pytest.fixture(scope="module")
def circle():
    return load_example("circle")


def continuation(b, entries, name="nu"):
    C = b.cocycle("m").source
    return CocycleMatrix("continuation", C, C, entries, b.dga, name)


def ints(A):
    return np.array(A.tolist(), dtype=object)


def test_identity_continuation(circle):
    m = circle.cocycle("m")
    nu = continuation(circle, {("min", "min"): "1", ("max", "max"): "1"})
    assert check_continuation_cocycle(m, m, nu).ok
    Psi = induce_chain_map(nu, circle.coefficient("Z-trivial"), m, m)
    for k in Psi.source.degrees:
        assert (Psi.matrix(k) == np.identity(Psi.source.dim(k), dtype=int)).all()


def test_corpus_continuation_and_its_sign_flip(circle):
    m0, m1 = circle.cocycle("m"), circle.cocycle("m1")
    assert check_continuation_cocycle(m0, m1, circle.cocycles["nu0"]).ok
    flipped = continuation(circle, {("min", "min"): "1", ("max", "max"): "-t"})
    assert check_continuation_cocycle(m0, m1, flipped).pairs() == [("max", "min")]
    # the other sign convention for the top entry does not satisfy this equation
    other = continuation(circle, {("min", "min"): "1", ("max", "max"): "-t^-1"})
    assert check_continuation_cocycle(m0, m1, other).pairs() == [("max", "min")]


def test_zero_homotopy(circle):
    m0, m1, nu0 = circle.cocycle("m"), circle.cocycle("m1"), circle.cocycles["nu0"]
    h = CocycleMatrix("homotopy", m0.source, m0.source, {}, circle.dga)
    assert check_homotopy_cocycle(nu0, nu0, h, m0, m1).ok


def test_corpus_homotopy_induces_equal_maps(circle):
    m0, m1 = circle.cocycle("m"), circle.cocycle("m1")
    nu0, nu1, h = circle.cocycles["nu0"], circle.cocycles["nu1"], circle.cocycles["h"]
    assert check_homotopy_cocycle(nu0, nu1, h, m0, m1).ok
    for tag in ("Z-trivial", "Z-sign", "loop-Q"):
        H = induce_homotopy(h, circle.coefficient(tag), m0, m1, nu0, nu1)
        H.check()
        Hs, Ht = homology(H.source), homology(H.target)
        a, b = induced_on_homology(H.psi0, Hs, Ht), induced_on_homology(H.psi1, Hs, Ht)
        assert all((a[k] == b[k]).all() for k in a)


laurent = st.dictionaries(st.integers(-2, 2), st.integers(-4, 4), max_size=3).map(
    lambda d: " + ".join(f"({c})*t^{e}" for e, c in d.items()) or "0")


@settings(max_examples=40, deadline=None)
@given(laurent)
def test_homotopy_fuzz(circle, p):
    # nu1 = nu0 + D h for h(min, max) = p; expanding the homotopy equation gives
    # nu1(max, max) = nu0(max, max) + (1 - t) p and nu1(min, min) = nu0(min, min) + p (t^-1 - 1)
    m0, m1, nu0 = circle.cocycle("m"), circle.cocycle("m1"), circle.cocycles["nu0"]
    R = circle.dga
    h = CocycleMatrix("homotopy", m0.source, m0.source, {("min", "max"): p}, R)
    P = R.element(p)
    nu1 = continuation(circle, {
        ("max", "max"): nu0[("max", "max")] + R.mul(R.element("1 - t"), P),
        ("min", "min"): nu0[("min", "min")] + R.mul(P, R.element("t^-1 - 1")),
    })
    assert check_continuation_cocycle(m0, m1, nu1).ok
    assert check_homotopy_cocycle(nu0, nu1, h, m0, m1).ok
    induce_homotopy(h, circle.coefficient("Z-sign"), m0, m1, nu0, nu1).check()


def test_dga_morphisms_and_pushforward(circle):
    R = circle.dga
    m = circle.cocycle("m")
    ident = DGAMorphism(R, R, {"t": "t"})
    assert ident.validate().ok
    assert pushforward_cocycle(ident, m).entries == m.entries

    square = DGAMorphism(R, R, {"t": "t^2"})
    assert square.validate().ok
    mp = pushforward_cocycle(square, m, modules=[circle.modules["triv"], circle.modules["sign"]])
    assert mp[("max", "min")] == R.element("1 - t^2")

    Rg = load_example("rp2").dga
    to_c2 = DGAMorphism(R, Rg, {"t": "g"})
    assert to_c2.validate().ok
    assert pushforward_cocycle(to_c2, m)[("max", "min")] == Rg.element("1 - g")

    back = DGAMorphism(Rg, R, {"g": "t"})
    assert [f.check for f in back.validate().failures] == ["relator"]


def test_module_morphisms():
    b = load_example("hopf")
    m = b.cocycle("m")
    F, T = b.modules["fiber"], b.modules["triv"]
    ident = ModuleMorphism(F, F, {"e0": "e0", "e1": "e1"})
    Psi = module_morphism_chain_map(ident, m.source, m)
    assert all((Psi.matrix(k) == np.identity(Psi.source.dim(k), dtype=int)).all() for k in Psi.source.degrees)
    assert Psi.expected_quasi_iso and is_quasi_iso(Psi)[0]

    proj = ModuleMorphism(F, T, {"e0": "e"})
    Psi = module_morphism_chain_map(proj, m.source, m)
    ind = induced_on_homology(Psi)
    assert ints(ind[0]).tolist() in ([[1]], [[-1]])
    assert not Psi.expected_quasi_iso and not is_quasi_iso(Psi)[0]

    zero = ModuleMorphism(F, T, {})
    Psi = module_morphism_chain_map(zero, m.source, m)
    assert all(not Psi.matrix(k).any() for k in Psi.source.degrees)

    with pytest.raises(NotModuleMorphism):
        module_morphism_chain_map(ModuleMorphism(F, F, {"e0": "e0"}), m.source, m)


def test_quasi_iso_decisions(circle):
    X = circle.complex("Z-trivial")
    assert is_quasi_iso(identity_map(X))[0]
    ok, cert = is_quasi_iso(zero_map(X, X))
    assert not ok and cert.nonzero_degrees
    acyclic = mapping_cone(identity_map(X))
    assert is_quasi_iso(zero_map(acyclic, acyclic))[0]


def test_cone_criterion_agrees_with_homology_maps(corpus):
    for b in corpus.values():
        for name, nu in b.cocycles.items():
            if nu.kind != "continuation":
                continue
            m0, m1 = b.cocycles[nu.refs["from"]], b.cocycles[nu.refs["to"]]
            for tag, (kind, _) in b.coefficients.items():
                if kind != "module":
                    continue
                Psi = induce_chain_map(nu, b.coefficient(tag), m0, m1)
                assert is_quasi_iso(Psi)[0] == induced_is_isomorphism(Psi), (b.name, name, tag)


def test_lifted_invertibility_implies_quasi_iso(corpus):
    for b in corpus.values():
        for name, nu in b.cocycles.items():
            if nu.kind == "continuation" and lifted_map_invertible(nu):
                m0, m1 = b.cocycles[nu.refs["from"]], b.cocycles[nu.refs["to"]]
                for tag, (kind, _) in b.coefficients.items():
                    if kind == "module":
                        assert is_quasi_iso(induce_chain_map(nu, b.coefficient(tag), m0, m1))[0]


def test_induced_maps_identity_zero_and_degree_two(circle):
    X = circle.complex("Z-trivial")
    ind = induced_on_homology(identity_map(X))
    assert all(ints(ind[k]).tolist() == [[1]] for k in (0, 1))
    ind = induced_on_homology(zero_map(X, X))
    assert all(ints(ind[k]).tolist() == [[0]] for k in (0, 1))

    b = load_example("circle-deg2-selfmap")
    F = b.coefficient("Z-trivial")
    push = induce_chain_map(b.cocycles["push"], F, b.cocycles["mX"], b.cocycles["m"])
    shriek = induce_chain_map(b.cocycles["shriek"], F, b.cocycles["m"], b.cocycles["mX"])
    ip, is_ = induced_on_homology(push), induced_on_homology(shriek)
    assert ints(ip[1]).tolist() == [[2]] and ints(is_[0]).tolist() == [[2]]
    # functoriality: the composite chain map induces the product of the induced maps
    comp = induced_on_homology(shriek.then(push))
    for k in (0, 1):
        assert (ints(comp[k]) == ints(ip[k]).dot(ints(is_[k]))).all()
    cocycle = compose_cocycles(b.cocycles["shriek"], b.cocycles["push"])
    direct = induced_on_homology(induce_chain_map(cocycle, F, b.cocycles["m"], b.cocycles["m"]))
    assert all((ints(direct[k]) == ints(comp[k])).all() for k in (0, 1))


def test_shriek_reindex(circle):
    X = circle.complex("Z-trivial")
    assert shriek_reindex(X, 1, 1).degrees == X.degrees
    Y = shriek_reindex(X, 0, 2)
    assert Y.degrees == [k - 2 for k in X.degrees]
    assert all((Y.matrix(k - 2) == X.matrix(k)).all() for k in X.degrees)
    C = circle.cocycle("m").source
    assert shriek_reindex_basis(C, 0, 2).index("max") == C.index("max") - 2
