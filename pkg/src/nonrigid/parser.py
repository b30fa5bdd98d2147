"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr     := ['-'] term (('+' | '-') ['-'] term)*
    term     := factor ('*' factor)*
    factor   := base ('^' nonneg_int)?
    base     := identifier | rational | '(' expr ')'
    rational := int ('/' posint)?

Implicit multiplication is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .ring import Poly, VarTable


class ParseError(ValueError):
    def __init__(self, message: str, src: str, pos: int):
        super().__init__(f"{message} at position {pos}: {src!r}")
        self.src = src
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()])|(?P<bad>\S))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            break
        kind = m.lastgroup
        if kind == "bad":
            if m.group("bad") == ".":
                raise ParseError("decimal literals are not allowed", src, m.start("bad"))
            raise ParseError(f"unexpected character {m.group('bad')!r}", src, m.start("bad"))
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str, table: VarTable):
        self.src = src
        self.table = table
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        return ParseError(message, self.src, tok.pos)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            got = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")

    def parse(self) -> Poly:
        p = self.expr()
        if self.tok.kind != "end":
            if self.tok.kind in ("int", "ident") or self.tok.text == "(":
                raise self.error("implicit multiplication is not allowed")
            raise self.error(f"unexpected {self.tok.text!r}")
        return p

    def expr(self) -> Poly:
        neg = self.accept("-")
        acc = self.term()
        if neg:
            acc = -acc
        while True:
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                return acc
            if self.accept("-"):
                sign = -sign
            t = self.term()
            acc = acc + t if sign > 0 else acc - t

    def term(self) -> Poly:
        acc = self.factor()
        while self.accept("*"):
            acc = acc * self.factor()
        return acc

    def factor(self) -> Poly:
        base = self.base()
        if self.accept("^"):
            tok = self.tok
            if tok.kind == "op" and tok.text == "-":
                raise self.error("negative exponent")
            if tok.kind != "int":
                raise self.error("exponent must be a non-negative integer literal")
            self.i += 1
            if self.tok.kind == "op" and self.tok.text == "/":
                raise self.error("exponent must be an integer")
            return base ** int(tok.text)
        return base

    def base(self) -> Poly:
        tok = self.tok
        if tok.kind == "ident":
            self.i += 1
            if tok.text not in self.table.symbols:
                raise self.error(f"undeclared identifier {tok.text!r}", tok)
            return self.table.gen(tok.text)
        if tok.kind == "int":
            self.i += 1
            value = Fraction(int(tok.text))
            if self.accept("/"):
                den = self.tok
                if den.kind != "int":
                    raise self.error("denominator must be an integer literal")
                if int(den.text) == 0:
                    raise self.error("zero denominator", den)
                self.i += 1
                value /= int(den.text)
            return Poly.constant(self.table, value)
        if self.accept("("):
            p = self.expr()
            self.expect(")")
            return p
        got = tok.text or "end of input"
        raise self.error(f"unexpected {got!r}")


def parse_expression(src: str, table: VarTable) -> Poly:
    return _Parser(src, table).parse()
