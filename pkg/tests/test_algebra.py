import pytest
from hypothesis import given, settings, strategies as st

from dgmorse.algebra import (DGAPresentation, DGModulePresentation, RegularModule, algebra_eval, koszul_sign,
                             truncated_regular_module, validate_dga, validate_module)
from dgmorse.errors import MissingTableEntry, SchemaViolation, WindowOverflow
from dgmorse.groups import FreeAbelianGroup, cyclic_group
from dgmorse.scalars import QQ

FREE_U = {("u", "u"): "u2", ("u", "u2"): "u3", ("u2", "u"): "u3"}


def free_on_u(diff=None, involution=None):
    return DGAPresentation([("u", 1), ("u2", 2), ("u3", 3)], (0, 3), mul=FREE_U, diff=diff, involution=involution)


def laurent_dga():
    return DGAPresentation([], (0, 0), group=FreeAbelianGroup(["t"]), involution={})


@pytest.mark.parametrize("p,q,want", [(0, 5, 1), (1, 1, -1), (3, 2, 1), (3, 3, -1)])
def test_koszul_sign(p, q, want):
    assert koszul_sign(p, q) == want


def test_laurent_dga_is_valid():
    assert validate_dga(laurent_dga()).ok


def test_free_algebra_on_u_is_valid():
    assert validate_dga(free_on_u()).ok


def test_unit_differential_breaks_leibniz():
    r = validate_dga(free_on_u(diff={"u": "1"}))
    assert not r.ok
    assert "leibniz" in r.kinds()
    assert ("u", "u2") in [v.witness for v in r.violations]


def test_leibniz_sign_on_odd_square():
    # d(a a) = (da) a - a (da) = 0 for |a| = 1, so d(b) = a contradicts b = a a
    good = DGAPresentation([("a", 1), ("b", 2)], (0, 2), mul={("a", "a"): "b"})
    bad = DGAPresentation([("a", 1), ("b", 2)], (0, 2), mul={("a", "a"): "b"}, diff={"b": "a"})
    assert validate_dga(good).ok
    r = validate_dga(bad)
    assert [v.witness for v in r.violations if v.kind == "leibniz"] == [("a", "a")]


def test_broken_involution_is_reported():
    # I(u) = u fails I(u u) = (-1)^{1} I(u) I(u) once I(u2) = -u2 is declared
    r = validate_dga(free_on_u(involution={"u": "u", "u2": "-u2", "u3": "u3"}))
    assert not r.ok
    assert any("involution" in k for k in r.kinds())


def test_missing_product_raises():
    with pytest.raises(MissingTableEntry):
        validate_dga(DGAPresentation([("u", 1), ("u2", 2)], (0, 2), mul={}))


def test_wrong_degree_table_entry_is_schema_violation():
    with pytest.raises(SchemaViolation) as exc:
        DGAPresentation([("u", 1), ("u2", 2)], (0, 2), mul={("u", "u"): "u"})
    assert exc.value.path == "dga.mul.u.u"


def test_algebra_eval_examples():
    R = laurent_dga()
    assert algebra_eval(R, "(1 - t)*(1 + t + t^2)") == algebra_eval(R, "1 - t^3")
    assert algebra_eval(R, "1 * (2 - t^-1)") == algebra_eval(R, "2 - t^-1")
    Rf = free_on_u()
    assert algebra_eval(Rf, "D(u*u)") == Rf.zero(1)
    with pytest.raises(WindowOverflow):
        algebra_eval(Rf, "u*u3")


def test_hopf_fiber_module_is_valid():
    R = free_on_u()
    F = DGModulePresentation(R, [("e0", 0), ("e1", 1)], {("e0", "u"): "e1", ("e1", "u"): "0", ("e0", "u2"): "0"})
    assert validate_module(F).ok


def test_module_associativity_mutation_names_triple():
    R = free_on_u()
    acts = {("e0", "u"): "e1", ("e1", "u"): "e2", ("e0", "u2"): "e2"}
    gens = [("e0", 0), ("e1", 1), ("e2", 2)]
    assert validate_module(DGModulePresentation(R, gens, acts)).ok
    r = validate_module(DGModulePresentation(R, gens, {**acts, ("e0", "u"): "-e1"}))
    assert [v.witness for v in r.violations] == [("e0", "u", "u")]


def test_missing_module_action_raises():
    R = free_on_u()
    with pytest.raises(MissingTableEntry):
        validate_module(DGModulePresentation(R, [("e0", 0), ("e1", 1)], {}))


def test_regular_modules_are_valid():
    R = free_on_u()
    assert validate_module(truncated_regular_module(R)).ok
    Rg = DGAPresentation([], (0, 0), group=cyclic_group("g", 3))
    with pytest.raises(SchemaViolation):
        truncated_regular_module(Rg)
    assert RegularModule(laurent_dga(), QQ).base == QQ


# ---------------------------------------------------------------- properties

R_FREE = free_on_u()
R_LAURENT = laurent_dga()
coef = st.integers(-5, 5)


laurent = st.dictionaries(st.integers(-3, 3), coef, max_size=4).map(
    lambda d: algebra_eval(R_LAURENT, " + ".join(f"({c})*t^{e}" for e, c in d.items()) or "0"))


@settings(max_examples=60, deadline=None)
@given(laurent, laurent, laurent)
def test_laurent_product_is_bilinear_and_associative(x, y, z):
    R = R_LAURENT
    assert R.mul(x + y, z) == R.mul(x, z) + R.mul(y, z)
    assert R.mul(R.mul(x, y), z) == R.mul(x, R.mul(y, z))
    assert R.mul(R.unit, x) == x


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 1), st.integers(0, 1), coef, coef, coef)
def test_free_algebra_linearity(da, db, a, b, c):
    R = R_FREE
    names = ["1", "u"]
    x = algebra_eval(R, f"({a})*{names[da]}")
    y = algebra_eval(R, f"({b})*{names[da]}")
    z = algebra_eval(R, f"({c})*{names[db]}")
    assert R.mul(x + y, z) == R.mul(x, z) + R.mul(y, z)


@settings(max_examples=30, deadline=None)
@given(laurent)
def test_involution_is_involutive_and_commutes_with_d(x):
    R = R_LAURENT
    assert R.involute(R.involute(x)) == x
    assert R.d(R.involute(x)) == R.involute(R.d(x))
