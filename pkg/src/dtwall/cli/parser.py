"""Recursive-descent parser for polynomial expressions over Q.

Grammar (``^`` binds tighter than unary minus, which binds tighter than
``*``, then ``+``/``-``; ``^`` is right-associative and takes integer
literals only)::

    expr     := term (("+" | "-") term)*
    term     := unary ("*" unary)*
    unary    := "-" unary | power
    power    := atom ("^" exponent)?
    exponent := INT ("^" exponent)?
    atom     := INT | RATIONAL | IDENT | "(" expr ")"

``RATIONAL`` is ``INT/INT`` written without spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import InputError
from ..exact import Polynomial
from ..exact.polynomial import format_polynomial, natural_key

MAX_EXPONENT = 10_000


class ExpressionError(InputError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<rational>\d+/\d+)"
    r"|(?P<int>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^()])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...] | None):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.declared = variables
        self.ring = variables if variables is not None else tuple(
            sorted({t.text for t in self.tokens if t.kind == "ident"}, key=natural_key)
        )

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Token | None = None):
        token = token or self.peek
        raise ExpressionError(message, self.text, token.position)

    def take(self, kind: str, text: str | None = None) -> Token | None:
        tok = self.peek
        if tok.kind == kind and (text is None or tok.text == text):
            self.pos += 1
            return tok
        return None

    def parse(self) -> Polynomial:
        if self.peek.kind == "end":
            self.error("empty expression")
        p = self.expr()
        if self.peek.kind != "end":
            self.error(f"unexpected {self.peek.text!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            if self.take("op", "+"):
                p = p + self.term()
            elif self.take("op", "-"):
                p = p - self.term()
            else:
                return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.take("op", "*"):
            p = p * self.unary()
        return p

    def unary(self) -> Polynomial:
        if self.take("op", "-"):
            return -self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.take("op", "^"):
            return base ** self.exponent()
        return base

    def exponent(self) -> int:
        tok = self.peek
        if tok.kind == "int":
            self.pos += 1
            e = int(tok.text)
            if self.take("op", "^"):
                inner = self.exponent()
                if e > 1 and inner > MAX_EXPONENT.bit_length():
                    self.error("exponent too large", tok)
                e = e**inner
            if e > MAX_EXPONENT:
                self.error("exponent too large", tok)
            return e
        if tok.kind == "op" and tok.text == "-":
            self.error("negative exponent")
        if tok.kind == "rational":
            self.error("non-integer exponent")
        self.error(f"exponent must be an integer literal, found {tok.text or 'end of input'!r}")

    def atom(self) -> Polynomial:
        tok = self.peek
        if tok.kind == "int":
            self.pos += 1
            return Polynomial.constant(int(tok.text), self.ring)
        if tok.kind == "rational":
            self.pos += 1
            num, den = tok.text.split("/")
            if int(den) == 0:
                self.error("zero denominator", tok)
            return Polynomial.constant(Fraction(int(num), int(den)), self.ring)
        if tok.kind == "ident":
            self.pos += 1
            if self.declared is not None and tok.text not in self.declared:
                self.error(f"undeclared identifier {tok.text!r}", tok)
            return Polynomial.variable(tok.text, self.ring)
        if self.take("op", "("):
            p = self.expr()
            if not self.take("op", ")"):
                self.error("expected ')'")
            return p
        self.error(f"unexpected {tok.text!r}" if tok.kind != "end" else "unexpected end of input")


def parse_expression(text: str, variables: Sequence[str] | None = None) -> Polynomial:
    """Parse ``text`` into a Polynomial over ``variables`` (if given, every
    identifier must be declared there)."""
    if not isinstance(text, str):
        raise InputError(f"expression must be a string, got {type(text).__name__}")
    return _Parser(text, tuple(variables) if variables is not None else None).parse()


def print_expression(p: Polynomial, variables: Sequence[str] | None = None) -> str:
    """Canonical form over the declared variable order (natural order by default)."""
    ring = tuple(variables) if variables is not None else tuple(sorted(p.free_variables(), key=natural_key))
    extra = [v for v in p.free_variables() if v not in ring]
    if extra:
        raise InputError(f"polynomial uses variables {extra} outside {ring}")
    return format_polynomial(p.with_variables(ring))
