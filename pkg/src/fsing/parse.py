"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

Implicit multiplication (``2x``) is rejected: multi-letter variable names
would make it ambiguous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ExponentOverflowParseError, ParseError, UnknownVariableError
from .polynomial import MAX_EXPONENT, Polynomial, PolyRing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))", re.S)


@dataclass
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    pos: int


def _tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        if not src[pos:].strip():
            break
        m = _TOKEN.match(src, pos)
        if m is None:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            tokens.append(Token("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(Token("name", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", src, *_linecol(src, start))
            tokens.append(Token("op", ch, start))
        pos = m.end()
    tokens.append(Token("end", "", len(src.rstrip()) if src.strip() else len(src)))
    return tokens


def _linecol(src: str, pos: int) -> tuple[int, int]:
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, src: str, ring: PolyRing):
        self.src = src
        self.ring = ring
        self.tokens = _tokenize(src)
        self.i = 0

    def error(self, msg, tok: Token, cls=ParseError):
        frag = tok.text or "end of input"
        raise cls(f"{msg} (near {frag!r})", self.src, *_linecol(self.src, tok.pos))

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self) -> Polynomial:
        if self.tok.kind == "end":
            self.error("empty expression", self.tok)
        f = self.expr()
        if self.tok.kind != "end":
            self.error("expected operator or end of input", self.tok)
        return f

    def expr(self) -> Polynomial:
        f = self.term()
        while True:
            if self.accept("+"):
                f = f + self.term()
            elif self.accept("-"):
                f = f - self.term()
            else:
                return f

    def term(self) -> Polynomial:
        f = self.unary()
        while self.accept("*"):
            f = f * self.unary()
        return f

    def unary(self) -> Polynomial:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.accept("^"):
            tok = self.tok
            if tok.kind != "int":
                self.error("exponent must be a non-negative integer literal", tok)
            self.advance()
            n = int(tok.text)
            if n > MAX_EXPONENT or base.max_exponent() * n > MAX_EXPONENT:
                self.error("exponent overflows 64 bits", tok, ExponentOverflowParseError)
            return base**n
        return base

    def atom(self) -> Polynomial:
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return self.ring.const(int(tok.text))
        if tok.kind == "name":
            self.advance()
            if not self.ring.has_var(tok.text):
                self.error(f"unknown variable {tok.text!r}; declared: {', '.join(self.ring.variables)}",
                           tok, UnknownVariableError)
            return self.ring.var(tok.text)
        if self.accept("("):
            f = self.expr()
            if not self.accept(")"):
                self.error("expected ')'", self.tok)
            return f
        self.error("expected a number, variable or '('", tok)


def parse_polynomial(src: str, ring: PolyRing) -> Polynomial:
    return _Parser(src, ring).parse()


def split_top_level(src: str, sep: str) -> list[str]:
    """Split on ``sep`` outside parentheses."""
    out, depth, cur = [], 0, []
    for ch in src:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_matrix_rows(src: str) -> list[list[str]]:
    """``[a, b; c, d]`` -> [["a", "b"], ["c", "d"]] (entries still as text)."""
    s = src.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError("matrix must be written as [a, b; c, d]", src, 1, 1)
    body = s[1:-1]
    rows = [[e.strip() for e in split_top_level(r, ",")] for r in split_top_level(body, ";")]
    width = len(rows[0])
    for r in rows:
        if len(r) != width or any(not e for e in r):
            raise ParseError("matrix rows must be non-empty and of equal length", src, 1, 1)
    return rows
