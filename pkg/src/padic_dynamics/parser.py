"""Recursive-descent parser for rational functions in ``z``.

Grammar (whitespace ignored)::

    rational := sum ('/' sum)?
    sum      := term (('+' | '-') term)*
    term     := factor ('*'? factor)*
    factor   := INT | INT '/' INT | 'z' | factor '^' UINT | '(' sum ')' | '-' factor

Only one top-level division is allowed. A factor that starts with '-' may
follow an explicit '*', never an implicit product, so ``2-3`` is a difference.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from . import poly
from .errors import ParseError, ZeroDenominator

_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            tokens.append(("INT", int(m.group(1)), m.start(1)))
        else:
            ch = m.group(2)
            if ch in "+-*/^()z":
                tokens.append((ch, ch, m.start(2)))
            elif ch.isspace():
                pass
            else:
                raise ParseError(f"unexpected character {ch!r}", m.start(2))
        pos = m.end()
    tokens.append(("EOF", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset=0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def take(self, kind=None, expected=()):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            raise ParseError(f"unexpected {tok[0]!r}", tok[2], expected or (kind,))
        self.i += 1
        return tok

    def rational(self):
        num = self.sum()
        den = [Fraction(1)]
        if self.peek()[0] == "/":
            self.take("/")
            den = self.sum()
        tok = self.peek()
        if tok[0] == "/":
            raise ParseError("nested division is not supported", tok[2], ("EOF",))
        if tok[0] != "EOF":
            raise ParseError(f"unexpected {tok[0]!r}", tok[2], ("+", "-", "*", "/", "EOF"))
        return num, den

    def sum(self):
        acc = self.term()
        while self.peek()[0] in "+-" and self.peek()[0] != "EOF":
            op = self.take()[0]
            rhs = self.term()
            acc = poly.add(acc, rhs) if op == "+" else poly.sub(acc, rhs)
        return acc

    def _starts_factor(self, allow_minus: bool) -> bool:
        kind = self.peek()[0]
        return kind in ("INT", "z", "(") or (allow_minus and kind == "-")

    def term(self):
        acc = self.factor()
        while True:
            if self.peek()[0] == "*":
                self.take("*")
                acc = poly.mul(acc, self.factor())
            elif self._starts_factor(allow_minus=False):
                acc = poly.mul(acc, self.factor())
            else:
                return acc

    def factor(self):
        base = self.primary()
        while self.peek()[0] == "^":
            self.take("^")
            tok = self.take("INT", ("UINT",))
            base = poly.power(base, tok[1])
        return base

    def primary(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "INT":
            self.take()
            if self.peek()[0] == "/" and self.peek(1)[0] == "INT" and self.peek(2)[0] != "^":
                self.take("/")
                den = self.take("INT")[1]
                if den == 0:
                    raise ParseError("zero denominator in constant", tok[2])
                return poly.trim([Fraction(tok[1], den)])
            return poly.trim([Fraction(tok[1])])
        if kind == "z":
            self.take()
            return [Fraction(0), Fraction(1)]
        if kind == "(":
            self.take()
            inner = self.sum()
            if self.peek()[0] == "/":
                raise ParseError("nested division is not supported", self.peek()[2], (")",))
            self.take(")")
            return inner
        if kind == "-":
            self.take()
            return poly.scale(self.factor(), -1)
        raise ParseError(f"unexpected {kind!r}", tok[2], ("INT", "z", "(", "-"))


def parse_rational_function(text: str):
    """Parse ``text`` into a (numerator, denominator) pair of rational polynomials."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0, ("INT", "z", "(", "-"))
    num, den = _Parser(text).rational()
    if not den:
        raise ZeroDenominator("denominator polynomial is identically zero")
    return num, den


def parse_coefficient_json(text_or_obj):
    """Parse ``{"num": [...], "den": [...]}`` with coefficients lowest degree first."""
    obj = text_or_obj
    if isinstance(text_or_obj, str):
        try:
            obj = json.loads(text_or_obj)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from exc
    if not isinstance(obj, dict) or "num" not in obj or "den" not in obj:
        raise ParseError('coefficient JSON needs "num" and "den" lists')
    try:
        num = [Fraction(str(c).strip()) for c in obj["num"]]
        den = [Fraction(str(c).strip()) for c in obj["den"]]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coefficient: {exc}") from exc
    num, den = poly.trim(num), poly.trim(den)
    if not den:
        raise ZeroDenominator("denominator polynomial is identically zero")
    return num, den
