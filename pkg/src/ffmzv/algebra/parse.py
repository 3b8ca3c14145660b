"""Text grammar for elements of A and k.

::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT | "x" | "[" INT ("," INT)* "]" | "(" expr ")"

``x`` stands for theta.  Integers are read mod p; ``[a0,a1,...]`` is an
element of F_q given by its digits over F_p (low to high).
"""

from __future__ import annotations

import re

from .field import FieldConfig
from .poly import Poly, RationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)|([-+*/^()\[\],]))")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        out.append((m.group(m.lastindex), start))
        pos = m.end()
    out.append(("", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, F: FieldConfig):
        self.toks = _tokenize(text)
        self.i = 0
        self.F = F

    def peek(self):
        return self.toks[self.i][0]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, s):
        tok, off = self.take()
        if tok != s:
            raise ParseError(f"expected {s!r}" + (f", got {tok!r}" if tok else ", got end of input"), off)

    def const(self, c):
        return RationalFunction(Poly.constant(self.F, c))

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            op, _ = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in ("*", "/"):
            op, off = self.take()
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", off)
                val = val / rhs
        return val

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            tok, off = self.take()
            if not tok.isdigit():
                raise ParseError("expected exponent", off)
            base = base ** int(tok)
        return base

    def atom(self):
        tok, off = self.take()
        if tok.isdigit():
            return self.const(self.F.from_int(int(tok)))
        if tok == "x":
            return RationalFunction(Poly.theta(self.F))
        if tok == "(":
            val = self.expr()
            self.expect(")")
            return val
        if tok == "[":
            digits = []
            while True:
                d, doff = self.take()
                if not d.isdigit():
                    raise ParseError("expected digit", doff)
                digits.append(int(d))
                sep, soff = self.take()
                if sep == "]":
                    break
                if sep != ",":
                    raise ParseError("expected ',' or ']'", soff)
            if len(digits) > self.F.e:
                raise ParseError("too many digits for F_q element", off)
            return self.const(self.F.from_digits(digits))
        raise ParseError(f"unexpected token {tok!r}" if tok else "unexpected end of input", off)


def parse_expr(text: str, F: FieldConfig):
    """Parse text into a :class:`Poly` (if the value is polynomial) or a
    :class:`RationalFunction` in lowest terms.

    >>> parse_expr("x^2+x", FieldConfig.from_q(2))
    x+x^2
    """
    p = _Parser(text, F)
    val = p.expr()
    tok, off = p.take()
    if tok:
        raise ParseError(f"unexpected token {tok!r}", off)
    return val.num if val.is_polynomial() else val


def parse_coefficient(text: str, F: FieldConfig) -> int:
    val = parse_expr(text, F)
    if not isinstance(val, Poly) or val.degree() > 0:
        raise ValueError(f"{text!r} is not an element of F_q")
    return val[0]
