"""Tiny expression language for table entries and algebra_eval.

    expr   := term (('+' | '-') term)*
    term   := ['-'] power (['*'] power)*          juxtaposition multiplies
    power  := atom ['^' ['-'] INT]
    atom   := INT ['/' INT] | NAME | NAME '(' expr ')' | '(' expr ')'

Names may contain letters, digits, '_' and '.'; they must not start with a digit.
Evaluation is delegated to a context object, see `evaluate`.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import BundleSyntaxError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_.']*)|(.))")


def tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, sym = m.groups()
        col = m.start(m.lastindex) + 1 if m.lastindex else pos + 1
        if num is not None:
            toks.append(("num", int(num), col))
        elif name is not None:
            toks.append(("name", name, col))
        elif sym is not None:
            if sym not in "+-*^()/":
                raise BundleSyntaxError(f"unexpected character {sym!r}", col=col)
            toks.append(("sym", sym, col))
        pos = m.end()
    toks.append(("end", None, len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, sym):
        t = self.take()
        if t[0] != "sym" or t[1] != sym:
            raise BundleSyntaxError(f"expected {sym!r}", col=t[2])
        return t

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise BundleSyntaxError(f"unexpected token {t[1]!r}", col=t[2])
        return node

    def expr(self):
        node = self.term()
        while True:
            t = self.peek()
            if t[0] == "sym" and t[1] in "+-":
                self.take()
                rhs = self.term()
                node = ("add", node, rhs) if t[1] == "+" else ("add", node, ("neg", rhs))
            else:
                return node

    def term(self):
        t = self.peek()
        negate = False
        if t[0] == "sym" and t[1] == "-":
            self.take()
            negate = True
        node = self.power()
        while True:
            t = self.peek()
            if t[0] == "sym" and t[1] == "*":
                self.take()
                node = ("mul", node, self.power())
            elif t[0] in ("num", "name") or (t[0] == "sym" and t[1] == "("):
                node = ("mul", node, self.power())
            else:
                break
        return ("neg", node) if negate else node

    def power(self):
        node = self.atom()
        t = self.peek()
        if t[0] == "sym" and t[1] == "^":
            self.take()
            sign = 1
            t = self.peek()
            if t[0] == "sym" and t[1] == "-":
                self.take()
                sign = -1
            t = self.take()
            if t[0] != "num":
                raise BundleSyntaxError("exponent must be an integer", col=t[2])
            node = ("pow", node, sign * t[1])
        return node

    def atom(self):
        t = self.take()
        if t[0] == "num":
            nxt = self.peek()
            if nxt[0] == "sym" and nxt[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "num" or den[1] == 0:
                    raise BundleSyntaxError("bad rational literal", col=den[2])
                return ("num", Fraction(t[1], den[1]))
            return ("num", t[1])
        if t[0] == "name":
            nxt = self.peek()
            if nxt[0] == "sym" and nxt[1] == "(":
                self.take()
                arg = self.expr()
                self.expect(")")
                return ("call", t[1], arg)
            return ("name", t[1], t[2])
        if t[0] == "sym" and t[1] == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise BundleSyntaxError("unexpected end of expression" if t[0] == "end" else f"unexpected {t[1]!r}",
                                col=t[2])


def parse_expr(text: str):
    if not text.strip():
        raise BundleSyntaxError("empty expression", col=1)
    return _Parser(text).parse()


def evaluate(node, ctx):
    """Evaluate a parsed expression.

    `ctx` must provide number(v), atom(name), add(a, b), mul(a, b), neg(a),
    power(a, n) and call(fname, a).
    """
    kind = node[0]
    if kind == "num":
        return ctx.number(node[1])
    if kind == "name":
        return ctx.atom(node[1])
    if kind == "add":
        return ctx.add(evaluate(node[1], ctx), evaluate(node[2], ctx))
    if kind == "mul":
        return ctx.mul(evaluate(node[1], ctx), evaluate(node[2], ctx))
    if kind == "neg":
        return ctx.neg(evaluate(node[1], ctx))
    if kind == "pow":
        return ctx.power(evaluate(node[1], ctx), node[2])
    if kind == "call":
        return ctx.call(node[1], evaluate(node[2], ctx))
    raise ValueError(f"bad node {node!r}")
