import pytest

from dgmorse.algebra import DGAPresentation, DGModulePresentation
from dgmorse.complexes import homology, restrict_scalars, verify_homology
from dgmorse.corpus import load_example
from dgmorse.errors import NoGroupDeclaration, SchemaViolation, UnsupportedRing, ValidationFailed
from dgmorse.groups import cyclic_group, trivial_group
from dgmorse.linalg import compose, is_zero_matrix
from dgmorse.scalars import ZZ
from dgmorse.twisted import (CocycleMatrix, CriticalBasis, Representation, build_twisted_complex,
                             check_maurer_cartan, degree_zero_formula, exact_through, lifted_complex,
                             local_coefficient_homology)

import oracles

HOPF_MUL = {("u", "u"): "u2", ("u", "u2"): "u3", ("u2", "u"): "u3"}


def hopf_dga():
    return DGAPresentation([("u", 1), ("u2", 2), ("u3", 3)], (0, 3), mul=HOPF_MUL, group=trivial_group())


def sphere_basis():
    return CriticalBasis((("min", 0), ("max", 2)), 2)


def test_mc_without_intermediate_points():
    R = hopf_dga()
    C = CriticalBasis((("y", 0), ("x", 1)), 1)
    m = CocycleMatrix("twisting", C, C, {("x", "y"): "3"}, R)
    assert check_maurer_cartan(C, R, m).ok


def test_mc_on_circle():
    b = load_example("circle")
    m = b.cocycle("m")
    assert check_maurer_cartan(m.source, b.dga, m).ok


def test_mc_flip_on_torus_names_max_min():
    b = load_example("torus2")
    m = b.cocycle("m")
    flipped = m.replace(entries={**m.entries, ("max", "a"): b.dga.element("1 + t")})
    d = check_maurer_cartan(m.source, b.dga, flipped)
    assert d.pairs() == [("max", "min")]


def test_wrong_degree_entry_is_schema_violation():
    R = hopf_dga()
    C = sphere_basis()
    with pytest.raises(SchemaViolation):
        CocycleMatrix("twisting", C, C, {("max", "min"): "u2"}, R)


def test_hopf_complex_shape():
    b = load_example("hopf")
    X = b.complex("fiber")
    assert {k: len(v) for k, v in X.basis.items() if v} == {0: 1, 1: 1, 2: 1, 3: 1}
    nonzero = [(k, M) for k, M in X.diff.items() if not is_zero_matrix(M)]
    assert len(nonzero) == 1
    k, M = nonzero[0]
    assert k == 2 and abs(M[0, 0]) == 1
    assert X.labels(2)[0] == ("e0", "max") and X.labels(1)[0] == ("e1", "min")


def test_zero_cocycle_gives_tensor_differential():
    b = load_example("hopf")
    C = b.cocycle("m").source
    zero = CocycleMatrix("twisting", C, C, {}, b.dga)
    X = build_twisted_complex(b.modules["fiber"], C, zero)
    assert all(is_zero_matrix(M) for M in X.diff.values())


def test_trivial_coefficients_reproduce_morse_complex():
    b = load_example("circle")
    X = b.complex("Z-trivial")
    assert X.matrix(1).tolist() == [[0]]
    X = b.complex("Z-sign")
    assert X.matrix(1).tolist() == [[2]]


@pytest.mark.parametrize("name,tag,cellular", [
    ("circle", "Z-trivial", oracles.CIRCLE),
    ("circle", "Z-sign", oracles.CIRCLE_SIGN),
    ("torus2", "Z-trivial", oracles.TORUS),
    ("rp2", "Z-trivial", oracles.RP2),
    ("rp2", "Z-minus", oracles.RP2_SIGN),
    ("rp2", "group-ring", oracles.RP2_COVER),
    ("klein", "Z-trivial", oracles.KLEIN),
    ("klein", "Z-orientation", oracles.KLEIN_ORIENT),
    ("hopf", "Z-trivial", oracles.SPHERE2),
    ("hopf", "fiber", oracles.SPHERE3),
    ("sphereN", "Z-trivial", oracles.SPHERE3),
])
def test_homology_matches_cellular_oracle(name, tag, cellular):
    b = load_example(name)
    H = b.homology(tag)
    want = oracles.integer_homology(*cellular)
    assert {k: H.describe(k) for k in want} == want


def test_frozen_cellular_values():
    # oracle outputs, frozen
    assert oracles.integer_homology(*oracles.RP2) == {0: "Z", 1: "Z/2", 2: "0"}
    assert oracles.integer_homology(*oracles.KLEIN) == {0: "Z", 1: "Z + Z/2", 2: "0"}
    assert oracles.integer_homology(*oracles.KLEIN_ORIENT) == {0: "Z/2", 1: "Z", 2: "Z"}
    assert oracles.integer_cohomology(*oracles.KLEIN_ORIENT) == {0: "0", 1: "Z + Z/2", 2: "Z"}


def test_circle_loop_coefficients_are_a_point():
    b = load_example("circle")
    H = b.homology("loop-Q")
    assert H.field_dimension(0) == oracles.laurent_quotient_dimension(1 - oracles.t) == 1
    assert H.field_dimension(1) == 0


def test_integer_laurent_homology_is_refused():
    b = load_example("circle")
    with pytest.raises(UnsupportedRing):
        b.homology("loop-Z")


def test_representatives_are_certified_cycles():
    X = load_example("rp2").complex("group-ring")
    verify_homology(restrict_scalars(X), homology(X))
    for name, tag in [("klein", "Z-trivial"), ("hopf", "fiber")]:
        X = load_example(name).complex(tag)
        H = homology(X)
        verify_homology(X, H)
        for k in X.degrees:
            for rep in H[k].reps:
                D = X.matrix(k)
                assert all(sum(D[i, j] * rep[j] for j in range(len(rep))) == 0 for i in range(D.shape[0]))


def test_lifted_complexes():
    t2 = load_example("torus2")
    m = t2.cocycle("m")
    L = lifted_complex(m.source, m, t2.dga)
    assert is_zero_matrix(compose(L.matrix(1), L.matrix(2), L.ring))
    with pytest.raises(UnsupportedRing, match="ℤ\\[ℤ²\\]"):
        homology(L)

    rp2 = load_example("rp2")
    m = rp2.cocycle("m")
    L = lifted_complex(m.source, m, rp2.dga)
    entries = sorted(L.ring.render(L.matrix(k)[0, 0]) for k in (1, 2))
    assert entries == sorted([L.ring.render(rp2.dga.to_group_ring(rp2.dga.element(e))) for e in ("1 + g", "g - 1")])

    zero = CocycleMatrix("twisting", m.source, m.source, {}, rp2.dga)
    assert all(is_zero_matrix(M) for M in lifted_complex(m.source, zero, rp2.dga).diff.values())


def test_lifted_complex_needs_group():
    R = DGAPresentation([("u", 1)], (0, 1))
    C = CriticalBasis((("min", 0), ("max", 1)), 1)
    with pytest.raises(NoGroupDeclaration):
        lifted_complex(C, CocycleMatrix("twisting", C, C, {}, R), R)


def test_local_coefficient_homology_on_rp2():
    b = load_example("rp2")
    m = b.cocycle("m")
    L = lifted_complex(m.source, m, b.dga)
    G = b.dga.group
    minus = Representation(G, ZZ, 1, {"g": [[-1]]})
    cases = [(Representation.trivial(G), oracles.RP2), (Representation.regular(G), oracles.RP2_COVER),
             (minus, oracles.RP2_SIGN)]
    for M, cell in cases:
        H = local_coefficient_homology(M, L)
        assert {k: H.describe(k) for k in (0, 1, 2)} == oracles.integer_homology(*cell)


def test_representation_must_respect_relations():
    with pytest.raises(ValidationFailed):
        Representation(cyclic_group("g", 2), ZZ, 1, {"g": [[2]]})


def test_degree_zero_formula_examples():
    b = load_example("hopf")
    m = b.cocycle("m")
    L = lifted_complex(m.source, m, b.dga)
    for tag in ("Z-trivial", "fiber"):
        pres, diag = degree_zero_formula(b.coefficient(tag), L, m.source, m)
        assert pres.describe() == "Z" and diag.ok

    R = hopf_dga()
    F = DGModulePresentation(R, [("e0", 0), ("f", 1)], {("e0", "u"): "0", ("f", "u"): "0", ("e0", "u2"): "0"},
                             {"f": "3*e0"}, name="Z/3")
    C = sphere_basis()
    mu = CocycleMatrix("twisting", C, C, {("max", "min"): "u"}, R)
    pres, diag = degree_zero_formula(F, lifted_complex(C, mu, R), C, mu)
    assert pres.describe() == "Z/3" and diag.ok


def test_euler_characteristic_matches_homology_ranks(corpus):
    for b in corpus.values():
        for tag, (kind, _) in b.coefficients.items():
            if kind != "module":
                continue
            for name, c in b.cocycles.items():
                if c.kind != "twisting":
                    continue
                X = b.complex(tag, name)
                H = homology(X)
                assert X.euler_characteristic() == sum((-1) ** k * H.free_rank(k) for k in X.degrees)


def test_truncated_regular_exactness_bound():
    s2 = load_example("sphere2")
    m = s2.cocycle("m")
    F = s2.coefficient("loop-Q")
    assert exact_through(F, m.source, m) == 4
    H = s2.homology("loop-Q")
    assert [H.describe(k) for k in range(0, 5)] == ["Q", "0", "0", "0", "0"]
    assert H.describe(6) == "Q"  # beyond the certified range: the truncation shows up
    sN = load_example("sphereN")
    m = sN.cocycle("m")
    assert exact_through(sN.coefficient("loop-Z"), m.source, m) == 7
    assert exact_through(sN.coefficient("Z-trivial"), m.source, m) is None


def test_d_squared_on_every_built_complex(corpus):
    for b in corpus.values():
        for tag in b.coefficients:
            for name, c in b.cocycles.items():
                if c.kind != "twisting":
                    continue
                try:
                    X = b.complex(tag, name)
                except UnsupportedRing:
                    continue
                X.check_d_squared()
                for k in X.degrees:
                    if k - 1 in X.basis:
                        assert is_zero_matrix(compose(X.matrix(k - 1), X.matrix(k), X.ring))


def test_degree_zero_formula_needs_a_module_presentation():
    b = load_example("rp2")
    m = b.cocycle("m")
    with pytest.raises(UnsupportedRing):
        degree_zero_formula(b.coefficient("group-ring"), lifted_complex(m.source, m, b.dga), m.source, m)
