"""Command-line interface.

Exit codes: 0 clean, 1 usage, 2 parse, 3 validation, 4 computation refused
(unsupported ring), 5 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .bundle import ExampleBundle, parse_bundle
from .corpus import CATALOG, fixture_text, render_matrix
from .errors import DGMorseError, UnknownExample, UsageError
from .scalars import GF, QQ


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dgmorse", description="Morse homology with DG coefficients, exactly.")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("validate", help="structural and cocycle checks")
    v.add_argument("bundle")
    v.add_argument("--expectations", action="store_true", help="also recompute stored expectations")

    h = sub.add_parser("homology", help="homology table for a coefficient tag")
    h.add_argument("bundle")
    h.add_argument("--coeff", required=True)
    h.add_argument("--cocycle")

    s = sub.add_parser("ss", help="spectral sequence pages of the index filtration")
    s.add_argument("bundle")
    s.add_argument("--coeff", required=True)
    s.add_argument("--cocycle")
    s.add_argument("--rmax", type=int, default=3)
    s.add_argument("--field", default="Q", help="Q or a prime p")

    m = sub.add_parser("map-check", help="continuation or homotopy cocycle checks")
    m.add_argument("bundle")
    m.add_argument("--kind", choices=("continuation", "homotopy"), required=True)
    m.add_argument("--name")
    m.add_argument("--coeff")

    d = sub.add_parser("duality", help="chain-level Poincare duality certification")
    d.add_argument("bundle")
    d.add_argument("--pairing")

    e = sub.add_parser("examples", help="list the catalog or print one bundle")
    e.add_argument("name", nargs="?")
    return p


def load_bundle(ref: str) -> ExampleBundle:
    if os.path.isfile(ref):
        with open(ref, encoding="utf-8") as fh:
            return parse_bundle(fh.read())
    base = os.path.basename(ref)
    base = base[:-7] if base.endswith(".bundle") else base
    if base in CATALOG:
        return parse_bundle(fixture_text(base))
    raise UnknownExample(f"no bundle file or catalog example named {ref!r}")


def _field(text: str):
    if text in ("Q", "QQ"):
        return QQ
    try:
        return GF(int(text))
    except ValueError:
        raise UsageError(f"--field must be Q or a prime, not {text!r}") from None


# ---------------------------------------------------------------- commands

def cmd_validate(args, b: ExampleBundle):
    reports = b.validate()
    ok = all(r.ok for r in reports)
    data = {"bundle": b.name, "ok": ok, "reports": [{"subject": r.subject, "ok": r.ok, "text": r.render()}
                                                     for r in reports]}
    lines = [r.render() for r in reports]
    if args.expectations:
        from .corpus import check_expectations
        results = check_expectations(b)
        ok = ok and all(r.ok for r in results)
        data["ok"] = ok
        data["expectations"] = [{"label": r.label, "ok": r.ok, "expected": r.expected, "got": r.got}
                                for r in results]
        lines += [r.render() for r in results]
    lines.append(f"{b.name}: {'valid' if ok else 'INVALID'}")
    return (0 if ok else 3), lines, data


def cmd_homology(args, b: ExampleBundle):
    from .twisted import exact_through
    m = b.cocycle(args.cocycle)
    F = b.coefficient(args.coeff)
    H = b.homology(args.coeff, m.name)
    degrees = b.complex(args.coeff, m.name).degrees
    table = H.table(degrees)
    lines = [f"homology of {b.name}, coefficients {args.coeff}, cocycle {m.name}"]
    if H.note:
        lines.append(f"  computed {H.note}")
    lines += [f"  H_{k} = {table[k]}" for k in degrees]
    data = {"bundle": b.name, "coefficients": args.coeff, "cocycle": m.name,
            "homology": {str(k): table[k] for k in degrees}}
    top = exact_through(F, m.source, m)
    if top is not None:
        lines.append(f"  truncated coefficients: exact through degree {top}")
        data["exact_through"] = top
    return 0, lines, data


def cmd_ss(args, b: ExampleBundle):
    from .spectral import canonical_filtration, compute_pages
    if args.rmax < 2:
        raise UsageError("--rmax must be at least 2")
    K = _field(args.field)
    X = b.complex(args.coeff, args.cocycle)
    ss = compute_pages(canonical_filtration(X), args.rmax, K)
    lines = [f"spectral sequence of {b.name}, coefficients {args.coeff}, over {K.name}"]
    pages = []
    for pg in ss:
        sup = pg.support()
        body = ", ".join(f"({p},{q}):{pg.dim(p, q)}" for p, q in sup) or "0"
        lines.append(f"  E{pg.r}: {body}" + ("  [stable]" if pg.stable else ""))
        ranks = {pq: pg.d_rank(*pq, K) for pq in sorted(pg.d)}
        for (p, q), r in ranks.items():
            if r:
                lines.append(f"    d{pg.r} ({p},{q}) -> ({p - pg.r},{q + pg.r - 1}): rank {r}")
        pages.append({"r": pg.r, "dims": {f"{p},{q}": pg.dim(p, q) for p, q in sup},
                      "d_ranks": {f"{p},{q}": r for (p, q), r in ranks.items() if r}, "stable": pg.stable})
    inf = ", ".join(f"({p},{q}):{ss.infinity.dim(p, q)}" for p, q in ss.infinity.support()) or "0"
    lines.append(f"  Einf: {inf}")
    lines.append("  H: " + ", ".join(f"{k}:{v}" for k, v in sorted(ss.homology_dims.items())))
    data = {"bundle": b.name, "field": K.name, "pages": pages,
            "infinity": {f"{p},{q}": ss.infinity.dim(p, q) for p, q in ss.infinity.support()},
            "homology_dims": {str(k): v for k, v in sorted(ss.homology_dims.items())}}
    return 0, lines, data


def cmd_map_check(args, b: ExampleBundle):
    from .complexes import homology
    from .morphisms import induce_chain_map, induce_homotopy, induced_on_homology, is_quasi_iso
    names = [n for n, c in b.cocycles.items() if c.kind == args.kind]
    if args.name:
        if args.name not in names:
            raise UsageError(f"no {args.kind} cocycle named {args.name!r}")
        names = [args.name]
    coeff = args.coeff or next(iter(b.coefficients), None)
    ok = True
    lines, entries = [], []
    for n in names:
        c = b.cocycles[n]
        diag = b.check_cocycle(c)
        ok = ok and diag.ok
        lines.append(diag.render())
        entry = {"cocycle": n, "ok": diag.ok, "failures": [f.render() for f in diag.failures]}
        if diag.ok and coeff is not None:
            F = b.coefficient(coeff)
            m0, m1 = b.cocycles[c.refs["from"]], b.cocycles[c.refs["to"]]
            if args.kind == "continuation":
                Psi = induce_chain_map(c, F, m0, m1)
                verdict = is_quasi_iso(Psi)[0]
                lines.append(f"  induced chain map with {coeff}: certified; quasi-isomorphism: {str(verdict).lower()}")
                entry["quasi_iso"] = verdict
            else:
                nu0, nu1 = b.cocycles[c.refs["nu0"]], b.cocycles[c.refs["nu1"]]
                Hm = induce_homotopy(c, F, m0, m1, nu0, nu1)
                Hs, Ht = homology(Hm.source), homology(Hm.target)
                a = induced_on_homology(Hm.psi0, Hs, Ht)
                z = induced_on_homology(Hm.psi1, Hs, Ht)
                agree = all((a[k] == z[k]).all() for k in a)
                lines.append(f"  chain homotopy with {coeff}: certified; induced maps agree on homology: "
                             f"{str(agree).lower()}")
                entry["agree_on_homology"] = agree
                ok = ok and agree
        entries.append(entry)
    if not names:
        lines.append(f"{b.name}: no {args.kind} cocycles")
    return (0 if ok else 3), lines, {"bundle": b.name, "kind": args.kind, "ok": ok, "cocycles": entries}


def cmd_duality(args, b: ExampleBundle):
    from .complexes import homology
    from .duality import poincare_duality_map
    names = [args.pairing] if args.pairing else sorted(b.pairings)
    if args.pairing and args.pairing not in b.pairings:
        raise UsageError(f"no pairing named {args.pairing!r}")
    lines, entries = [], []
    ok = True
    for n in names:
        F, mn, mp, w = b.pairings[n]
        pd = poincare_duality_map(b.modules[F], b.cocycles[mn], b.cocycles[mp], b.characters.get(w))
        Hs, Ht = homology(pd.source), homology(pd.target)
        ok = ok and bool(pd.iso_on_homology)
        lines.append(f"pairing {n} ({F}{', twisted by ' + w if w else ''}): d PD = PD d certified; "
                     f"isomorphism on homology: {str(pd.iso_on_homology).lower()}")
        rows = []
        for k in pd.source.degrees:
            lines.append(f"  H_{k} = {Hs.describe(k)}  <->  H^{pd.n - k} = {Ht.describe(pd.n - k)}")
            rows.append({"k": k, "homology": Hs.describe(k), "cohomology": Ht.describe(pd.n - k)})
        entries.append({"pairing": n, "iso": bool(pd.iso_on_homology), "table": rows})
    if not names:
        lines.append(f"{b.name}: no pairings declared")
    return (0 if ok else 3), lines, {"bundle": b.name, "ok": ok, "pairings": entries}


def cmd_examples(args):
    if args.name:
        text = fixture_text(args.name)
        if args.format == "structured":
            return 0, [parse_bundle(text).render("structured").rstrip("\n")], None
        return 0, [text.rstrip("\n")], None
    lines, data = [], []
    for n in CATALOG:
        b = parse_bundle(fixture_text(n))
        tags = ", ".join(b.coefficients)
        lines.append(f"{n:<22} dim {b.dim}  coefficients: {tags}")
        data.append({"name": n, "dimension": b.dim, "coefficients": list(b.coefficients)})
    return 0, lines, {"examples": data}


COMMANDS = {"validate": cmd_validate, "homology": cmd_homology, "ss": cmd_ss, "map-check": cmd_map_check,
            "duality": cmd_duality}


def run_command(argv) -> tuple:
    """Run one command; returns (exit code, report text)."""
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; choose from validate, homology, ss, map-check, duality, examples")
        if args.command == "examples":
            code, lines, data = cmd_examples(args)
        else:
            code, lines, data = COMMANDS[args.command](args, load_bundle(args.bundle))
        if args.format == "structured" and data is not None:
            return code, json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        return code, "\n".join(lines) + "\n"
    except DGMorseError as exc:
        return exc.exit_code, f"error: {exc}\n"
    except Exception as exc:  # a bug, not a user error
        return 5, f"internal error: {type(exc).__name__}: {exc}\n"


def main(argv=None) -> int:
    code, text = run_command(sys.argv[1:] if argv is None else argv)
    failed = text.startswith(("error:", "internal error:"))
    (sys.stderr if failed else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
