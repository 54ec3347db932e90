"""Bundle documents: a line-oriented text format and its JSON mirror.

Grammar (one statement per line, '#' starts a comment line):

    document  := section+
    section   := '[' KIND ARG* ']' NL statement*
    statement := KEY ARG* ('=' VALUE)? NL

Blank lines separate sections in the canonical rendering.  VALUE is kept
verbatim (expressions are exact decimal/Laurent literals), so rendering a
parsed canonical document reproduces it byte for byte.

Section kinds: bundle, dga, critical, module, cocycle, morphism, character,
pairing, coefficients, expect, notes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .algebra import (DGAPresentation, DGModulePresentation, RegularModule, truncated_regular_module,
                      validate_dga, validate_module)
from .duality import SignCharacter, check_pairing
from .errors import (BundleSyntaxError, DGMorseError, ParseError, SchemaViolation, UnknownTag,
                     UnresolvedName, ValidationFailed)
from .groups import FreeAbelianGroup, SemidirectZZ, cyclic_group, trivial_group
from .morphisms import (DGAMorphism, check_continuation_cocycle, check_homotopy_cocycle, compose_cocycles,
                        pushforward_cocycle)
from .scalars import scalar_ring
from .twisted import CocycleMatrix, CriticalBasis, check_cohomological_maurer_cartan, check_maurer_cartan

SECTION_KINDS = ("bundle", "dga", "critical", "module", "cocycle", "morphism", "character", "pairing",
                 "coefficients", "expect", "notes")


# ---------------------------------------------------------------- document model

@dataclass
class Statement:
    key: str
    args: list
    value: str | None = None
    line: int = 0

    def render(self) -> str:
        head = " ".join([self.key] + list(self.args))
        return head if self.value is None else f"{head} = {self.value}"

    def to_json(self):
        d = {"key": self.key, "args": list(self.args)}
        if self.value is not None:
            d["value"] = self.value
        return d

    def __eq__(self, other):
        return (self.key, list(self.args), self.value) == (other.key, list(other.args), other.value)


@dataclass
class Section:
    kind: str
    args: list
    statements: list = field(default_factory=list)
    line: int = 0

    def render(self) -> str:
        head = "[" + " ".join([self.kind] + list(self.args)) + "]"
        return "\n".join([head] + [s.render() for s in self.statements])

    def to_json(self):
        return {"kind": self.kind, "args": list(self.args), "statements": [s.to_json() for s in self.statements]}

    def __eq__(self, other):
        return (self.kind, list(self.args), self.statements) == (other.kind, list(other.args), other.statements)

    def path(self):
        return ".".join([self.kind] + list(self.args[:1]))


@dataclass
class Document:
    sections: list

    def render(self) -> str:
        return "\n\n".join(s.render() for s in self.sections) + "\n"

    def to_json(self):
        return {"sections": [s.to_json() for s in self.sections]}

    def render_json(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def of_kind(self, kind):
        return [s for s in self.sections if s.kind == kind]


def parse_document(text: str) -> Document:
    sections: list = []
    cur = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise BundleSyntaxError("section header lacks ']'", line=lineno, col=len(raw.rstrip()) + 1)
            words = line[1:-1].split()
            if not words:
                raise BundleSyntaxError("empty section header", line=lineno, col=1)
            if words[0] not in SECTION_KINDS:
                raise SchemaViolation(f"unknown section kind {words[0]!r}", line=lineno, col=2, path=words[0])
            cur = Section(words[0], words[1:], [], lineno)
            sections.append(cur)
            continue
        if cur is None:
            raise BundleSyntaxError("statement outside any section", line=lineno, col=1)
        if "=" in line:
            i = line.index("=")
            head, value = line[:i], line[i + 1:].strip()
            if not value:
                raise BundleSyntaxError("missing value after '='", line=lineno, col=raw.index("=") + 2)
        else:
            head, value = line, None
        words = head.split()
        if not words:
            raise BundleSyntaxError("missing key before '='", line=lineno, col=raw.index("=") + 1)
        cur.statements.append(Statement(words[0], words[1:], value, lineno))
    if not sections:
        raise SchemaViolation("empty document", path="<root>")
    return Document(sections)


def document_from_json(data) -> Document:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise BundleSyntaxError(exc.msg, line=exc.lineno, col=exc.colno) from None
    if not isinstance(data, dict) or not data.get("sections"):
        raise SchemaViolation("empty document", path="<root>")
    secs = []
    for i, s in enumerate(data["sections"]):
        try:
            if s["kind"] not in SECTION_KINDS:
                raise SchemaViolation(f"unknown section kind {s['kind']!r}", path=f"sections[{i}]")
            stmts = [Statement(t["key"], list(t.get("args", [])), t.get("value")) for t in s.get("statements", [])]
            secs.append(Section(s["kind"], list(s.get("args", [])), stmts))
        except (KeyError, TypeError):
            raise SchemaViolation("malformed section", path=f"sections[{i}]") from None
    return Document(secs)


# ---------------------------------------------------------------- resolved bundle

@dataclass
class Expectation:
    kind: str          # homology, pages, map, duality
    args: list
    items: list        # (key, args, value)


@dataclass
class ExampleBundle:
    name: str
    dim: int
    scalars: object
    dga: DGAPresentation
    bases: dict
    modules: dict
    cocycles: dict
    morphisms: dict
    characters: dict
    pairings: dict
    coefficients: dict
    expectations: list
    notes: list
    document: Document

    # ---- coefficients
    def coefficient(self, tag):
        spec = self.coefficients.get(tag)
        if spec is None:
            raise UnknownTag(f"bundle {self.name} declares no coefficients {tag!r}; "
                             f"known: {', '.join(self.coefficients) or 'none'}")
        kind, arg = spec
        if kind == "module":
            return self.modules[arg]
        if kind == "regular":
            return RegularModule(self.dga, scalar_ring(arg) if arg else None)
        return truncated_regular_module(self.dga)

    @property
    def default_cocycle(self) -> str:
        tw = [n for n, c in self.cocycles.items() if c.kind == "twisting"]
        return "m" if "m" in tw else tw[0]

    def cocycle(self, name=None) -> CocycleMatrix:
        name = name or self.default_cocycle
        if name not in self.cocycles:
            raise UnresolvedName(f"no cocycle named {name}", path=f"cocycle.{name}")
        return self.cocycles[name]

    def complex(self, tag, cocycle=None):
        from .twisted import build_twisted_complex
        m = self.cocycle(cocycle)
        return build_twisted_complex(self.coefficient(tag), m.source, m)

    def homology(self, tag, cocycle=None, **kw):
        from .complexes import homology
        return homology(self.complex(tag, cocycle), **kw)

    # ---- validation
    def validate(self) -> list:
        """All structural reports: DGA, modules, cocycle relations, pairings."""
        out = [validate_dga(self.dga)]
        out += [validate_module(F) for F in self.modules.values()]
        for c in self.cocycles.values():
            out.append(self.check_cocycle(c))
        for name, (F, mn, mp, w) in self.pairings.items():
            d = check_pairing(self.cocycles[mn], self.cocycles[mp], self.characters.get(w))
            d.subject = f"pairing {name}"
            out.append(d)
        return out

    def check_cocycle(self, c: CocycleMatrix):
        if c.kind == "twisting":
            return check_maurer_cartan(c.source, self.dga, c)
        if c.kind == "cotwisting":
            return check_cohomological_maurer_cartan(c.source, self.dga, c)
        refs = c.refs or {}
        m0, m1 = self.cocycles[refs["from"]], self.cocycles[refs["to"]]
        if c.kind == "continuation":
            return check_continuation_cocycle(m0, m1, c)
        return check_homotopy_cocycle(self.cocycles[refs["nu0"]], self.cocycles[refs["nu1"]], c, m0, m1)

    def is_valid(self) -> bool:
        return all(r.ok for r in self.validate())

    def render(self, fmt="text") -> str:
        return self.document.render_json() if fmt == "structured" else self.document.render()


def _one(sec: Section, key, required=True):
    found = [s for s in sec.statements if s.key == key]
    if len(found) > 1:
        raise SchemaViolation(f"duplicate {key}", line=found[1].line, path=f"{sec.path()}.{key}")
    if not found:
        if required:
            raise SchemaViolation(f"missing {key}", line=sec.line, path=f"{sec.path()}.{key}")
        return None
    return found[0]


def _need_args(st: Statement, n, path, value=None):
    if len(st.args) != n or (value is True and st.value is None) or (value is False and st.value is not None):
        raise SchemaViolation(f"malformed '{st.key}' statement", line=st.line, path=path)


def _int(tok, st, path):
    try:
        return int(tok)
    except ValueError:
        raise SchemaViolation(f"{tok!r} is not an integer", line=st.line, path=path) from None


def _group(st: Statement, path):
    kind, rest = (st.args[0], st.args[1:]) if st.args else ("", [])
    if kind == "trivial" and not rest:
        return trivial_group()
    if kind == "cyclic" and len(rest) == 2:
        return cyclic_group(rest[0], _int(rest[1], st, path))
    if kind == "free-abelian" and rest:
        return FreeAbelianGroup(rest)
    if kind == "semidirect" and len(rest) == 3:
        return SemidirectZZ(rest[0], rest[1], _int(rest[2], st, path))
    raise SchemaViolation(f"unknown group declaration {' '.join(st.args)!r}", line=st.line, path=path)


class _Resolver:
    def __init__(self, doc: Document):
        self.doc = doc

    def run(self) -> ExampleBundle:
        doc = self.doc
        heads = doc.of_kind("bundle")
        if len(heads) != 1 or len(heads[0].args) != 1:
            raise SchemaViolation("a document needs exactly one [bundle NAME] section", path="<root>")
        head = heads[0]
        name = head.args[0]
        st = _one(head, "dimension")
        dim = _int(st.args[0] if st.args else "", st, "bundle.dimension")
        st = _one(head, "scalars")
        try:
            scalars = scalar_ring(st.args[0] if st.args else "")
        except ValueError as exc:
            raise SchemaViolation(str(exc), line=st.line, path="bundle.scalars") from None
        self.scalars = scalars
        dgas = doc.of_kind("dga")
        if len(dgas) != 1:
            raise SchemaViolation("a document needs exactly one [dga] section", path="dga")
        R = self.dga(dgas[0])
        self.R = R
        bases = {}
        for sec in doc.of_kind("critical"):
            bases[self._name(sec)] = self.critical(sec)
        self.bases = bases
        modules = {}
        for sec in doc.of_kind("module"):
            modules[self._name(sec)] = self.module(sec)
        self.modules = modules
        morphisms = {}
        for sec in doc.of_kind("morphism"):
            morphisms[self._name(sec)] = self.morphism(sec)
        self.morphisms = morphisms
        cocycles: dict = {}
        self.cocycles = cocycles
        for sec in doc.of_kind("cocycle"):
            cocycles[self._name(sec)] = self.cocycle(sec)
        characters = {}
        for sec in doc.of_kind("character"):
            characters[self._name(sec)] = self.character(sec)
        self.characters = characters
        pairings = {}
        for sec in doc.of_kind("pairing"):
            pairings[self._name(sec)] = self.pairing(sec)
        coeffs = {}
        for sec in doc.of_kind("coefficients"):
            coeffs[self._name(sec)] = self.coefficient(sec)
        expectations = [self.expectation(sec, coeffs) for sec in doc.of_kind("expect")]
        notes = [st.value or " ".join(st.args) for sec in doc.of_kind("notes") for st in sec.statements]
        return ExampleBundle(name, dim, scalars, R, bases, modules, cocycles, morphisms, characters,
                             pairings, coeffs, expectations, notes, doc)

    # ---- helpers
    def _name(self, sec: Section):
        if not sec.args:
            raise SchemaViolation(f"[{sec.kind}] needs a name", line=sec.line, path=sec.kind)
        return sec.args[0]

    def _ref(self, table, name, sec: Section, what):
        if name not in table:
            raise UnresolvedName(f"unknown {what} {name!r}", line=sec.line, path=f"{sec.path()}.{what}")
        return table[name]

    def _wrap(self, fn, st: Statement | Section, path):
        try:
            return fn()
        except ParseError as exc:
            if exc.line is not None:
                raise
            raise type(exc)(exc.message, line=st.line, path=exc.path or path) from None
        except ValidationFailed as exc:
            raise SchemaViolation(str(exc), line=st.line, path=path) from None

    # ---- sections
    def dga(self, sec: Section) -> DGAPresentation:
        gens, mul, diff, inv = [], {}, {}, None
        window, group, unit = None, None, "1"
        for st in sec.statements:
            path = f"dga.{st.key}"
            if st.key == "window":
                _need_args(st, 2, path, False)
                window = (_int(st.args[0], st, path), _int(st.args[1], st, path))
            elif st.key == "group":
                group = _group(st, path)
            elif st.key == "unit":
                _need_args(st, 1, path, False)
                unit = st.args[0]
            elif st.key == "generator":
                _need_args(st, 2, path, False)
                gens.append((st.args[0], _int(st.args[1], st, path)))
            elif st.key == "mul":
                _need_args(st, 2, path, True)
                mul[(st.args[0], st.args[1])] = st.value
            elif st.key == "diff":
                _need_args(st, 1, path, True)
                diff[st.args[0]] = st.value
            elif st.key == "involution":
                inv = inv if inv is not None else {}
                if st.args or st.value is not None:
                    _need_args(st, 1, path, True)
                    inv[st.args[0]] = st.value
            else:
                raise SchemaViolation(f"unknown dga statement {st.key!r}", line=st.line, path=path)
        if window is None:
            raise SchemaViolation("missing window", line=sec.line, path="dga.window")
        return self._wrap(lambda: DGAPresentation(gens, window, mul, diff, self.scalars, group, inv, unit),
                          sec, "dga")

    def critical(self, sec: Section) -> CriticalBasis:
        name = self._name(sec)
        st = _one(sec, "dimension")
        dim = _int(st.args[0] if st.args else "", st, f"critical.{name}.dimension")
        pts = []
        for st in sec.statements:
            if st.key == "dimension":
                continue
            if st.key != "point":
                raise SchemaViolation(f"unknown statement {st.key!r}", line=st.line, path=f"critical.{name}")
            _need_args(st, 2, f"critical.{name}.point", False)
            pts.append((st.args[0], _int(st.args[1], st, f"critical.{name}.{st.args[0]}")))
        return self._wrap(lambda: CriticalBasis(tuple(pts), dim, name), sec, f"critical.{name}")

    def module(self, sec: Section) -> DGModulePresentation:
        name = self._name(sec)
        sense = sec.args[1] if len(sec.args) > 1 else "homological"
        gens, action, diff = [], {}, {}
        for st in sec.statements:
            path = f"module.{name}.{st.key}"
            if st.key == "generator":
                _need_args(st, 2, path, False)
                gens.append((st.args[0], _int(st.args[1], st, path)))
            elif st.key == "act":
                _need_args(st, 2, path, True)
                action[(st.args[0], st.args[1])] = st.value
            elif st.key == "diff":
                _need_args(st, 1, path, True)
                diff[st.args[0]] = st.value
            else:
                raise SchemaViolation(f"unknown module statement {st.key!r}", line=st.line, path=path)
        return self._wrap(lambda: DGModulePresentation(self.R, gens, action, diff, sense, name), sec,
                          f"module.{name}")

    def morphism(self, sec: Section) -> DGAMorphism:
        name = self._name(sec)
        images = {}
        for st in sec.statements:
            if st.key != "image":
                raise SchemaViolation(f"unknown statement {st.key!r}", line=st.line, path=f"morphism.{name}")
            _need_args(st, 1, f"morphism.{name}.image", True)
            images[st.args[0]] = st.value
        return self._wrap(lambda: DGAMorphism(self.R, self.R, images, name), sec, f"morphism.{name}")

    def _entries(self, sec: Section, name):
        entries = {}
        for st in sec.statements:
            if st.key != "entry":
                raise SchemaViolation(f"unknown statement {st.key!r}", line=st.line, path=f"cocycle.{name}")
            _need_args(st, 2, f"cocycle.{name}.entry", True)
            entries[(st.args[0], st.args[1])] = (st.value, st)
        return entries

    def cocycle(self, sec: Section) -> CocycleMatrix:
        name = self._name(sec)
        if len(sec.args) < 2:
            raise SchemaViolation("cocycle header needs a kind", line=sec.line, path=f"cocycle.{name}")
        kind, rest = sec.args[1], sec.args[2:]
        arity = {"twisting": 1, "cotwisting": 1, "continuation": 2, "homotopy": 4, "pushforward": 2, "compose": 2}
        if kind not in arity or len(rest) != arity[kind]:
            raise SchemaViolation(f"malformed cocycle header for kind {kind!r}", line=sec.line,
                                  path=f"cocycle.{name}")
        if kind in ("pushforward", "compose"):
            if sec.statements:
                raise SchemaViolation(f"{kind} cocycles are derived and take no entries",
                                      line=sec.statements[0].line, path=f"cocycle.{name}")
            if kind == "pushforward":
                Phi = self._ref(self.morphisms, rest[0], sec, "morphism")
                m = self._ref(self.cocycles, rest[1], sec, "cocycle")
                mods = [F for F in self.modules.values() if F.sense == "homological"]
                out = self._wrap(lambda: pushforward_cocycle(Phi, m, modules=mods), sec, f"cocycle.{name}")
            else:
                a = self._ref(self.cocycles, rest[0], sec, "cocycle")
                b = self._ref(self.cocycles, rest[1], sec, "cocycle")
                out = compose_cocycles(a, b)
                out.refs = {"from": a.refs["from"], "to": b.refs["to"]}
            out.name = name
            return out
        raw = self._entries(sec, name)
        refs = {}
        if kind in ("twisting", "cotwisting"):
            src = tgt = self._ref(self.bases, rest[0], sec, "critical")
        else:
            m0 = self._ref(self.cocycles, rest[0], sec, "cocycle")
            m1 = self._ref(self.cocycles, rest[1], sec, "cocycle")
            src, tgt = m0.source, m1.source
            refs = {"from": rest[0], "to": rest[1]}
            if kind == "homotopy":
                for r, key in zip(rest[2:], ("nu0", "nu1")):
                    self._ref(self.cocycles, r, sec, "cocycle")
                    refs[key] = r
        for (x, y), (_, st) in raw.items():
            for p, basis in ((x, src), (y, tgt)):
                if p not in basis.names:
                    raise UnresolvedName(f"unknown critical point {p!r}", line=st.line,
                                         path=f"cocycle.{name}.{x}.{y}")
        entries = {}
        for (x, y), (v, st) in raw.items():
            entries[(x, y)] = self._wrap(lambda v=v: self.R.element(v), st, f"cocycle.{name}.{x}.{y}")
        first = min((st.line for _, st in raw.values()), default=sec.line)
        lines = {k: st.line for k, (_, st) in raw.items()}
        try:
            return CocycleMatrix(kind, src, tgt, entries, self.R, name, refs)
        except SchemaViolation as exc:
            key = tuple((exc.path or "").split(".")[2:4])
            raise SchemaViolation(str(exc).split(": ", 1)[-1], line=lines.get(key, first),
                                  path=exc.path) from None

    def character(self, sec: Section) -> SignCharacter:
        name = self._name(sec)
        signs = {}
        for st in sec.statements:
            if st.key != "sign":
                raise SchemaViolation(f"unknown statement {st.key!r}", line=st.line, path=f"character.{name}")
            _need_args(st, 2, f"character.{name}.sign", False)
            signs[st.args[0]] = _int(st.args[1], st, f"character.{name}.{st.args[0]}")
        return self._wrap(lambda: SignCharacter(self.R.group, signs, name), sec, f"character.{name}")

    def pairing(self, sec: Section):
        name = self._name(sec)
        F = self._ref(self.modules, _one(sec, "module").args[0], sec, "module")
        mn = _one(sec, "homological").args[0]
        mp = _one(sec, "cohomological").args[0]
        self._ref(self.cocycles, mn, sec, "cocycle")
        self._ref(self.cocycles, mp, sec, "cocycle")
        st = _one(sec, "character", required=False)
        w = None
        if st is not None:
            w = st.args[0]
            self._ref(self.characters, w, sec, "character")
        return (F.name, mn, mp, w)

    def coefficient(self, sec: Section):
        name = self._name(sec)
        if len(sec.statements) != 1:
            raise SchemaViolation("coefficients need exactly one statement", line=sec.line,
                                  path=f"coefficients.{name}")
        st = sec.statements[0]
        if st.key == "module":
            _need_args(st, 1, f"coefficients.{name}", False)
            self._ref(self.modules, st.args[0], sec, "module")
            return ("module", st.args[0])
        if st.key == "regular":
            if len(st.args) > 1:
                raise SchemaViolation("malformed regular statement", line=st.line, path=f"coefficients.{name}")
            if st.args:
                try:
                    scalar_ring(st.args[0])
                except ValueError as exc:
                    raise SchemaViolation(str(exc), line=st.line, path=f"coefficients.{name}") from None
            return ("regular", st.args[0] if st.args else None)
        if st.key == "truncated-regular" and not st.args:
            return ("truncated-regular", None)
        raise SchemaViolation(f"unknown coefficient kind {st.key!r}", line=st.line, path=f"coefficients.{name}")

    def expectation(self, sec: Section, coeffs) -> Expectation:
        if not sec.args:
            raise SchemaViolation("expect needs a kind", line=sec.line, path="expect")
        kind, rest = sec.args[0], sec.args[1:]
        arity = {"homology": 2, "pages": 3, "map": 2, "duality": 1}
        if kind not in arity or len(rest) != arity[kind]:
            raise SchemaViolation(f"malformed expect header {' '.join(sec.args)!r}", line=sec.line, path="expect")
        if kind in ("homology", "pages"):
            if rest[0] not in coeffs:
                raise UnresolvedName(f"unknown coefficients {rest[0]!r}", line=sec.line, path=f"expect.{kind}")
            self._ref(self.cocycles, rest[1], sec, "cocycle")
        if kind == "map":
            self._ref(self.cocycles, rest[0], sec, "cocycle")
            if rest[1] not in coeffs:
                raise UnresolvedName(f"unknown coefficients {rest[1]!r}", line=sec.line, path="expect.map")
        items = [(st.key, list(st.args), st.value) for st in sec.statements]
        return Expectation(kind, list(rest), items)


def resolve(doc: Document) -> ExampleBundle:
    return _Resolver(doc).run()


def parse_bundle(text: str) -> ExampleBundle:
    """Parse text (or its JSON mirror) into a resolved bundle."""
    stripped = text.lstrip()
    doc = document_from_json(stripped) if stripped.startswith("{") else parse_document(text)
    return resolve(doc)


def render_bundle(b: ExampleBundle, fmt: str = "text") -> str:
    return b.render(fmt)


__all__ = ["Document", "Section", "Statement", "ExampleBundle", "Expectation", "parse_document",
           "document_from_json", "parse_bundle", "render_bundle", "resolve", "DGMorseError"]
