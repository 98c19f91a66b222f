"""Expression text for ring elements.

Grammar (whitespace insensitive)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := atom ('^' ['-'] INT)?
    atom    := RATIONAL | 'x'INT | 't' | 'exp(t)' | 'exp(-t)' | '(' expr ')'

Exponents on ``x_i``, ``t`` and parenthesized groups must be nonnegative;
``exp(t)`` and ``exp(-t)`` take any integer exponent.  Rendering emits terms
in descending monomial order and is reparseable.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .ring import ONE, RingElem, T, exp_t, x


class ExpressionError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        self.column = pos + 1
        super().__init__(f"{message} at column {pos + 1} in {text!r}")


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>\d+(?:/\d+)?)"
    r"|(?P<exp>exp\(\s*(?P<esign>-?)\s*t\s*\))"
    r"|(?P<x>x(?P<xi>\d+))"
    r"|(?P<t>t)"
    r"|(?P<op>[-+*^()])"
    r")"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError("unexpected character", text, _skip_ws(text, pos))
        start = m.start(m.lastgroup) if m.lastgroup else pos
        if m.group("num"):
            tokens.append(("num", Fraction(m.group("num")), start))
        elif m.group("exp"):
            tokens.append(("exp", -1 if m.group("esign") else 1, start))
        elif m.group("x"):
            tokens.append(("x", int(m.group("xi")), start))
        elif m.group("t"):
            tokens.append(("t", None, start))
        else:
            tokens.append((m.group("op"), None, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def _skip_ws(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


class _Parser:
    def __init__(self, text: str, n_vars: int | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.n_vars = n_vars

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ExpressionError(f"expected {kind!r}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> RingElem:
        if self.peek()[0] == "end":
            raise ExpressionError("empty expression", self.text, 0)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionError("unexpected token", self.text, tok[2])
        return value

    def expr(self) -> RingElem:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        value = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RingElem:
        value = self.factor()
        while self.peek()[0] == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self) -> RingElem:
        kind, base, negative_ok = self.atom()
        if self.peek()[0] != "^":
            return base
        caret = self.take()
        neg = False
        if self.peek()[0] == "-":
            self.take()
            neg = True
        tok = self.take("num")
        if tok[1].denominator != 1:
            raise ExpressionError("exponent must be an integer", self.text, tok[2])
        e = int(tok[1]) * (-1 if neg else 1)
        if e < 0 and not negative_ok:
            raise ExpressionError("negative exponent only allowed on exp(t)", self.text, caret[2])
        return base ** e

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return kind, RingElem.const(val), False
        if kind == "exp":
            return kind, exp_t(val), True
        if kind == "x":
            if val < 1 or (self.n_vars is not None and val > self.n_vars):
                raise ExpressionError(f"coordinate x{val} out of range", self.text, pos)
            return kind, x(val), False
        if kind == "t":
            return kind, T, False
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return kind, inner, False
        raise ExpressionError("unexpected token", self.text, pos)


def parse_expr(text: str, n_vars: int | None = None) -> RingElem:
    """Parse expression text into a canonical ring element.

    ``n_vars`` bounds the admissible coordinate indices when given.
    """
    if isinstance(text, (int, Fraction)):
        return RingElem.const(text)
    if not isinstance(text, str):
        raise ExpressionError(f"expression must be a string, got {type(text).__name__}", str(text), 0)
    return _Parser(text, n_vars).parse()


def _render_monomial(mono) -> list[str]:
    parts = []
    for i, e in enumerate(mono.alpha):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e:
            parts.append(f"x{i + 1}^{e}")
    if mono.m == 1:
        parts.append("t")
    elif mono.m:
        parts.append(f"t^{mono.m}")
    if mono.k == 1:
        parts.append("exp(t)")
    elif mono.k == -1:
        parts.append("exp(-t)")
    elif mono.k > 0:
        parts.append(f"exp(t)^{mono.k}")
    elif mono.k:
        parts.append(f"exp(-t)^{-mono.k}")
    return parts


def render(a: RingElem) -> str:
    items = a.items()
    if not items:
        return "0"
    out = []
    for idx, (mono, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        c = abs(c)
        parts = _render_monomial(mono)
        if c != 1 or not parts:
            parts.insert(0, str(c))
        body = "*".join(parts)
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def render_factor(a: RingElem) -> str:
    """Render for use as a multiplicative factor (parenthesized if a sum)."""
    s = render(a)
    if len(a.items()) > 1:
        return f"({s})"
    return s


__all__ = ["ExpressionError", "parse_expr", "render", "render_factor", "ONE"]
