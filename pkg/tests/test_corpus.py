import pytest

from dgmorse.algebra import AlgebraElement
from dgmorse.corpus import CATALOG, check_expectations, expected_homology, load_example
from dgmorse.errors import UnknownExample, UnknownTag, WindowOverflow
from dgmorse.twisted import check_maurer_cartan


def test_catalog_loads():
    for name in CATALOG:
        b = load_example(name)
        assert b.name == name and b.is_valid()
    with pytest.raises(UnknownExample):
        load_example("moebius")


def test_stored_homology():
    assert expected_homology("rp2", "Z-trivial") == {0: "Z", 1: "Z/2", 2: "0"}
    assert expected_homology("rp2", "group-ring") == {0: "Z", 1: "0", 2: "Z"}
    assert expected_homology("circle", "loop-Q") == {0: "Q[t^+-1]/(1 - t)", 1: "0"}
    with pytest.raises(UnknownTag):
        expected_homology("circle", "nowhere")


def test_every_stored_expectation_recomputes(corpus):
    results = [r for b in corpus.values() for r in check_expectations(b)]
    assert results
    assert [r.render() for r in results if not r.ok] == []


def flip_sign_mutations(b):
    """Every cocycle entry with one term's sign flipped."""
    for c in b.cocycles.values():
        if c.kind not in ("twisting", "continuation", "homotopy"):
            continue
        for (x, y), v in c.entries.items():
            for key, coef in v.terms:
                term = AlgebraElement(b.dga, {key: coef}, v.degree)
                yield c, (x, y), term, c.replace(entries={**c.entries, (x, y): v - term - term})


def neighbours(b, c):
    """(left, right) twisting cocycles multiplying c in its defining equation."""
    if c.kind == "twisting":
        return c, c
    return b.cocycles[c.refs["from"]], b.cocycles[c.refs["to"]]


def predicted_pairs(b, c, x, y, term):
    """Pairs whose equation changes when `term` at (x, y) changes sign."""
    R = b.dga
    left, right = neighbours(b, c)
    out = set()
    products = [((x, z), lambda z=z: R.mul(term, right[(y, z)])) for z in right.target.names
                if right.source.index(y) > right.target.index(z)]
    products += [((z, y), lambda z=z: R.mul(left[(z, x)], term)) for z in left.source.names
                 if left.source.index(z) > left.target.index(x)]
    for pair, prod in products:
        try:
            if prod():
                out.add(pair)
        except WindowOverflow:
            pass
    if R.d(term):
        out.add((x, y))
    return out


def test_sign_flips_are_caught(corpus):
    checked = 0
    for b in corpus.values():
        for c, (x, y), term, bad in flip_sign_mutations(b):
            expect = predicted_pairs(b, c, x, y, term)
            if not expect:
                continue
            d = b.check_cocycle(bad)
            assert not d.ok, (b.name, c.name, x, y)
            assert set(d.pairs()) & expect, (b.name, c.name, x, y, d.pairs(), expect)
            checked += 1
    assert checked >= 10
