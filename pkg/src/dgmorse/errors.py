"""Exception types.  Each carries enough context to point at the culprit."""


class DGMorseError(Exception):
    """Base class for every error raised by the engine."""

    exit_code = 5


class UsageError(DGMorseError):
    exit_code = 1


class ParseError(DGMorseError):
    """Malformed bundle text.  `line`/`col` are 1-based; `path` is a key path."""

    exit_code = 2

    def __init__(self, message, line=None, col=None, path=None):
        self.line = line
        self.col = col
        self.path = path
        self.message = message
        where = []
        if line is not None:
            where.append(f"line {line}")
        if col is not None:
            where.append(f"col {col}")
        if path:
            where.append(f"at {path}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class BundleSyntaxError(ParseError):
    pass


class UnresolvedName(ParseError):
    pass


class SchemaViolation(ParseError):
    pass


class ValidationFailed(DGMorseError):
    """A bundle or presentation failed its structural checks."""

    exit_code = 3

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class MissingTableEntry(ValidationFailed):
    def __init__(self, a, b=None):
        self.a, self.b = a, b
        what = f"({a}, {b})" if b is not None else f"{a}"
        super().__init__(f"missing table entry {what}")


class WindowOverflow(DGMorseError):
    exit_code = 3

    def __init__(self, degree, window):
        self.degree = degree
        self.window = window
        super().__init__(f"degree {degree} escapes the window [{window[0]}, {window[1]}]")


class UnsupportedRing(DGMorseError):
    """The computation would need linear algebra over a ring we refuse to handle."""

    exit_code = 4


class FieldRequired(DGMorseError):
    exit_code = 4


class NoGroupDeclaration(DGMorseError):
    exit_code = 3


class NoInvolution(DGMorseError):
    exit_code = 3


class InconsistentCharacter(DGMorseError):
    exit_code = 3


class ActionNotGroupFactored(DGMorseError):
    exit_code = 3


class NotModuleMorphism(DGMorseError):
    exit_code = 3


class PairingMismatch(DGMorseError):
    exit_code = 3


class UnknownExample(DGMorseError):
    exit_code = 1


class UnknownTag(DGMorseError):
    exit_code = 1


class InvariantBreach(DGMorseError):
    """An internal certificate failed.  This means a bug or corrupt input data."""

    exit_code = 5


class DSquaredNonzero(InvariantBreach):
    def __init__(self, degree, column, residual=None):
        self.degree, self.column, self.residual = degree, column, residual
        super().__init__(f"d^2 != 0 leaving degree {degree}, column {column}")


class NotAChainMap(InvariantBreach):
    def __init__(self, degree, column, residual=None):
        self.degree, self.column, self.residual = degree, column, residual
        super().__init__(f"not a chain map in degree {degree}, column {column}")


class NotAHomotopy(InvariantBreach):
    def __init__(self, degree, column, residual=None):
        self.degree, self.column, self.residual = degree, column, residual
        super().__init__(f"homotopy identity fails in degree {degree}, column {column}")
