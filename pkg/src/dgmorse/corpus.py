"""The example catalog: fixture bundles, their stored expectations, and a checker."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .bundle import ExampleBundle, parse_bundle
from .complexes import homology
from .errors import UnknownExample, UnknownTag, ValidationFailed
from .scalars import scalar_ring

CATALOG = ("circle", "sphere2", "sphereN", "torus2", "rp2", "klein", "hopf",
           "circle-deg2-selfmap", "sphere2-pd-pair", "klein-pd-pair")


def fixture_text(name: str) -> str:
    if name not in CATALOG:
        raise UnknownExample(f"unknown example {name!r}; catalog: {', '.join(CATALOG)}")
    return resources.files("dgmorse").joinpath("fixtures", f"{name}.bundle").read_text(encoding="utf-8")


def load_example(name: str) -> ExampleBundle:
    """Parse a catalog bundle and re-validate everything in it."""
    b = parse_bundle(fixture_text(name))
    bad = [r for r in b.validate() if not r.ok]
    if bad:
        raise ValidationFailed("\n".join(r.render() for r in bad), report=bad)
    return b


def expected_homology(name: str, tag: str, cocycle: str | None = None) -> dict:
    """Stored homology table {degree: description} for a coefficient tag."""
    b = parse_bundle(fixture_text(name))
    cocycle = cocycle or b.default_cocycle
    for e in b.expectations:
        if e.kind == "homology" and e.args[0] == tag and e.args[1] == cocycle:
            return {int(args[0]): value for _, args, value in e.items}
    raise UnknownTag(f"{name} stores no homology expectation for {tag!r}")


def render_matrix(A) -> str:
    return "; ".join(", ".join(str(v) for v in row) for row in A.tolist()) if A.size else "0"


@dataclass
class CheckResult:
    label: str
    ok: bool
    expected: str
    got: str

    def render(self):
        mark = "ok  " if self.ok else "FAIL"
        return f"{mark} {self.label}: expected {self.expected}, got {self.got}"


def check_expectations(b: ExampleBundle) -> list:
    """Recompute every stored expectation; one CheckResult per stored value."""
    out = []
    for e in b.expectations:
        out += _CHECKERS[e.kind](b, e)
    return out


def _check_homology(b, e):
    tag, cocycle = e.args
    H = b.homology(tag, cocycle)
    return [CheckResult(f"{b.name} H_{args[0]}({tag}, {cocycle})", H.describe(int(args[0])) == v, v,
                        H.describe(int(args[0]))) for _, args, v in e.items]


def _check_pages(b, e):
    from .spectral import canonical_filtration, compute_pages
    tag, cocycle, fname = e.args
    X = b.complex(tag, cocycle)
    rmax = max(int(k[1:]) if k.startswith("E") else int(args[0][1:]) for k, args, _ in e.items)
    ss = compute_pages(canonical_filtration(X), max(rmax, 2), scalar_ring(fname))
    out = []
    for k, args, v in e.items:
        if k.startswith("E"):
            r, p, q = int(k[1:]), int(args[0]), int(args[1])
            got = ss[r].dim(p, q)
            label = f"{b.name} E{r}[{p},{q}]({tag})"
        else:
            r, p, q = int(args[0][1:]), int(args[1]), int(args[2])
            got = ss[r].d_rank(p, q, ss.field)
            label = f"{b.name} rank d{r}[{p},{q}]({tag})"
        out.append(CheckResult(label, str(got) == v, v, str(got)))
    return out


def _check_map(b, e):
    from .morphisms import induce_chain_map, induced_on_homology, is_quasi_iso, lifted_map_invertible
    name, tag = e.args
    nu = b.cocycles[name]
    m0, m1 = b.cocycles[nu.refs["from"]], b.cocycles[nu.refs["to"]]
    Psi = induce_chain_map(nu, b.coefficient(tag), m0, m1)
    ind = None
    out = []
    for k, args, v in e.items:
        if k == "quasi-iso":
            got = str(is_quasi_iso(Psi)[0]).lower()
        elif k == "lifted-invertible":
            got = str(lifted_map_invertible(nu)).lower()
        else:
            if ind is None:
                ind = induced_on_homology(Psi)
            got = render_matrix(ind[int(args[0])])
        label = f"{b.name} {name} {k}{' ' + args[0] if args else ''}({tag})"
        out.append(CheckResult(label, got == v, v, got))
    return out


def _check_duality(b, e):
    from .duality import poincare_duality_map
    (pname,) = e.args
    F, mn, mp, w = b.pairings[pname]
    pd = poincare_duality_map(b.modules[F], b.cocycles[mn], b.cocycles[mp], b.characters.get(w))
    Hs, Ht = homology(pd.source), homology(pd.target)
    out = [CheckResult(f"{b.name} {pname} chain map", True, "d PD = PD d", "certified"),
           CheckResult(f"{b.name} {pname} iso on homology", bool(pd.iso_on_homology), "true",
                       str(pd.iso_on_homology).lower())]
    for k, args, v in e.items:
        H = Hs if k == "homology" else Ht
        got = H.describe(int(args[0]))
        out.append(CheckResult(f"{b.name} {pname} {k} {args[0]}", got == v, v, got))
    return out


_CHECKERS = {"homology": _check_homology, "pages": _check_pages, "map": _check_map, "duality": _check_duality}
