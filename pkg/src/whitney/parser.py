"""Text grammar for polynomials and problem files.

Polynomials::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('+' | '-') factor | atom ('^' INT)?
    atom   := INT ('/' INT)? | NAME | '(' expr ')'

Problem files are line oriented: ``#`` starts a comment, ``vars: x1 x2``
declares the ring, and tagged lines ``f: g: h: i: u:`` carry one polynomial
each.  ``f``/``g`` lines make an immersion problem, ``h``/``i``/``u`` lines a
degree problem.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from gmpy2 import mpq

from whitney.polyring import Polynomial, VarRing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class _Parser:
    def __init__(self, text: str, ring: VarRing, line: int, col0: int):
        self.ring = ring
        self.line = line
        self.col0 = col0
        self.tokens = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            kind = "int" if m.group(1) else "name" if m.group(2) else "op"
            value = m.group(m.lastindex)
            self.tokens.append((kind, value, m.start(m.lastindex)))
            pos = m.end()
        if text[pos:].strip():
            self.fail("unexpected input", pos)
        self.end = len(text)
        self.i = 0

    def fail(self, message, pos=None):
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else self.end
        raise ParseError(message, self.line, self.col0 + pos + 1)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, self.end)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, value, _ = self.peek()
        if kind != "op" or value != op:
            self.fail(f"expected {op!r}")
        self.i += 1

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.fail("empty polynomial")
        p = self.expr()
        if self.i < len(self.tokens):
            self.fail(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.i += 1
                q = self.term()
                p = p + q if value == "+" else p - q
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.i += 1
                p = p * self.factor()
            elif kind in ("int", "name") or (kind == "op" and value == "("):
                self.fail("implicit multiplication is not allowed; use '*'")
            else:
                return p

    def factor(self):
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.i += 1
            p = self.factor()
            return -p if value == "-" else p
        p = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.i += 1
            kind, value, pos = self.take()
            if kind != "int":
                self.fail("exponent must be a non-negative integer", pos)
            p = p ** int(value)
        return p

    def atom(self):
        kind, value, pos = self.take()
        if kind == "int":
            num = int(value)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.i += 1
                k3, v3, pos3 = self.take()
                if k3 != "int":
                    self.fail("expected integer denominator", pos3)
                if int(v3) == 0:
                    self.fail("zero denominator", pos3)
                return Polynomial.const(self.ring, mpq(num, int(v3)))
            return Polynomial.const(self.ring, num)
        if kind == "name":
            if value not in self.ring:
                self.fail(f"unknown variable {value!r}", pos)
            return Polynomial.var(self.ring, value)
        if kind == "op" and value == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        self.i -= 1
        self.fail("expected a number, variable or '('" if kind else "unexpected end of input")


def parse_polynomial(text: str, ring: VarRing, *, line: int = 1, column: int = 0) -> Polynomial:
    return _Parser(text, ring, line, column).parse()


# ---------------------------------------------------------------------------
# problem files

@dataclass
class ProblemFile:
    kind: str                      # "immersion" or "degree"
    vars: list[str]
    statements: list[tuple[str, str, int]] = field(default_factory=list)   # (tag, text, line)

    def tagged(self, tag: str) -> list[str]:
        return [text for t, text, _ in self.statements if t == tag]


_TAGS = {"f": "immersion", "g": "immersion", "h": "degree", "i": "degree", "u": "degree"}


def parse_problem(text: str) -> ProblemFile:
    """Parse a problem file and validate tag counts.

    Every polynomial is parsed (so syntax errors surface with their line),
    but the returned object keeps the raw text; build the problem objects
    with :func:`whitney.degree.problem_from_file`.
    """
    names = None
    statements = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            raise ParseError("expected 'tag: content'", lineno, 1)
        tag, body = line.split(":", 1)
        tag = tag.strip()
        col = len(line) - len(body)
        if tag == "vars":
            if names is not None:
                raise ParseError("duplicate vars line", lineno, 1)
            names = body.split()
            if not names:
                raise ParseError("vars line is empty", lineno, col + 1)
            for v in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                    raise ParseError(f"bad variable name {v!r}", lineno, col + body.index(v) + 1)
            if len(set(names)) != len(names):
                raise ParseError("duplicate variable names", lineno, col + 1)
            continue
        if tag not in _TAGS:
            raise ParseError(f"unknown tag {tag!r}", lineno, 1)
        if names is None:
            raise ParseError("'vars:' must come before polynomial lines", lineno, 1)
        parse_polynomial(body, VarRing(names), line=lineno, column=col)
        statements.append((tag, body.strip(), lineno))
    if names is None:
        raise ParseError("missing 'vars:' line", 1, 1)
    kinds = {_TAGS[t] for t, _, _ in statements}
    if len(kinds) > 1:
        raise ParseError("cannot mix f/g lines with h/i/u lines", statements[-1][2], 1)
    if not kinds:
        raise ParseError("no polynomial lines", 1, 1)
    pf = ProblemFile(kinds.pop(), list(names), statements)
    nv = len(names)
    last = statements[-1][2]
    if pf.kind == "immersion":
        n = len(pf.tagged("f"))
        m = nv - n
        if m < 1:
            raise ParseError(f"need fewer f lines than variables (got {n} for {nv} vars)", last, 1)
        if len(pf.tagged("g")) != 2 * m:
            raise ParseError(f"need 2m = {2 * m} map components, got {len(pf.tagged('g'))}", last, 1)
    else:
        if len(pf.tagged("h")) != nv:
            raise ParseError(f"need {nv} h lines (one per variable), got {len(pf.tagged('h'))}", last, 1)
        if len(pf.tagged("u")) > 1:
            raise ParseError("at most one u line", last, 1)
    return pf
