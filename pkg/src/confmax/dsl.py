"""Text format for vector fields.

Grammar (whitespace between tokens is ignored)::

    field  := term { ("+" | "-") term } | "0"
    term   := [ coeff ] { factor } "d" INT
    factor := "x" INT [ "^" INT ]
    coeff  := INT [ "/" INT ]

A leading "-" folds into the first coefficient.  ``*`` is accepted as an
optional separator between coefficient and factors, so the printer's
``x1^2*x2`` monomials parse back.  Indices are 1-based.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .fields import VectorField, format_field
from .poly import Polynomial

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<sym>[xd^/+\-*]))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if mt is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        if mt.group("int") is not None:
            tokens.append(("int", mt.group("int"), mt.start("int")))
        else:
            tokens.append((mt.group("sym"), mt.group("sym"), mt.start("sym")))
        pos = mt.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.tokens = _tokenize(text)
        self.k = 0
        self.n = n

    def peek(self) -> str:
        return self.tokens[self.k][0]

    def pos(self) -> int:
        return self.tokens[self.k][2]

    def take(self, kind: str) -> str:
        tk, val, pos = self.tokens[self.k]
        if tk != kind:
            shown = "end of input" if tk == "end" else repr(val)
            raise ParseError(f"expected {'integer' if kind == 'int' else repr(kind)}, found {shown}", pos)
        self.k += 1
        return val

    def index(self, what: str) -> int:
        pos = self.pos()
        i = int(self.take("int"))
        if not 1 <= i <= self.n:
            raise ParseError(f"{what} index {i} out of range 1..{self.n}", pos)
        return i

    def term(self, sign: int, comps: list[dict]) -> None:
        coeff = Fraction(sign)
        if self.peek() == "int":
            pos = self.pos()
            num = int(self.take("int"))
            den = 1
            if self.peek() == "/":
                self.take("/")
                pos = self.pos()
                den = int(self.take("int"))
                if den == 0:
                    raise ParseError("zero denominator", pos)
            coeff *= Fraction(num, den)
        exps = [0] * self.n
        while True:
            if self.peek() == "*":
                self.take("*")
            if self.peek() != "x":
                break
            self.take("x")
            v = self.index("variable")
            e = 1
            if self.peek() == "^":
                self.take("^")
                e = int(self.take("int"))
            exps[v - 1] += e
        self.take("d")
        i = self.index("direction")
        mono = tuple(exps)
        comps[i - 1][mono] = comps[i - 1].get(mono, 0) + coeff

    def field(self) -> VectorField:
        comps: list[dict] = [{} for _ in range(self.n)]
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take(self.peek()) == "-" else 1
        self.term(sign, comps)
        while self.peek() in ("+", "-"):
            sign = -1 if self.take(self.peek()) == "-" else 1
            self.term(sign, comps)
        if self.peek() != "end":
            tk, val, pos = self.tokens[self.k]
            raise ParseError(f"unexpected {val!r}", pos)
        return VectorField([Polynomial(self.n, c) for c in comps])


def parse_field(text: str, n: int) -> VectorField:
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if not text.strip():
        raise ParseError("empty input", 0)
    if text.strip() == "0":
        return VectorField.zero(n)
    return _Parser(text, n).field()


def print_field(X: VectorField) -> str:
    return format_field(X)
