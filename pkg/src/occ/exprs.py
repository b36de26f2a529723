"""A tiny expression language for task files and command-line elements.

Supports names bound in an environment, integer and rational literals,
`+ - * / ^` with the usual precedence, parentheses, and the law-aware calls
`F(a, b)` (group-law sum) and `inv(a)` (formal inverse).  Division accepts a
unit series on the right.  Errors carry the 1-based character position.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .series import CalculusError, NotAUnit, Series, invert_unit


class ExprError(CalculusError):
    """Malformed expression; `pos` is the 1-based character offset."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (position {pos})")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([()+\-*/^,]))")


def _tokenize(text):
    out = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            stripped = text[i:].lstrip()
            if not stripped:
                break
            pos = len(text) - len(stripped) + 1
            raise ExprError(f"unexpected character {stripped[0]!r}", pos)
        if m.group(1):
            out.append(("int", m.group(1), m.start(1) + 1))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2) + 1))
        else:
            out.append(("op", m.group(3), m.start(3) + 1))
        i = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text, env, law, context):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0
        self.env = env
        self.law = law
        self.context = context

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ExprError(f"expected {op!r}", pos)

    def parse(self):
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprError(f"unexpected {val!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                if val == "*":
                    value = value * rhs
                else:
                    try:
                        value = value * invert_unit(rhs)
                    except NotAUnit:
                        raise ExprError("division by a non-unit", pos) from None
            else:
                return value

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        value = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ExprError("exponent must be an integer literal", pos)
            return value ** int(val)
        return value

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return self.context.const(Fraction(val))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "name":
            nxt_kind, nxt_val, _ = self.peek()
            if nxt_kind == "op" and nxt_val == "(":
                return self.call(val, pos)
            if val in self.env:
                return self.env[val]
            raise ExprError(f"unknown name {val!r}", pos)
        raise ExprError(f"unexpected {val!r}" if val else "unexpected end of input", pos)

    def call(self, name, pos):
        self.expect("(")
        args = [self.expr()]
        while True:
            kind, val, p = self.peek()
            if kind == "op" and val == ",":
                self.take()
                args.append(self.expr())
            else:
                break
        self.expect(")")
        if name == "F":
            if len(args) != 2:
                raise ExprError("F takes two arguments", pos)
            return self.law.apply(args[0], args[1])
        if name == "inv":
            if len(args) != 1:
                raise ExprError("inv takes one argument", pos)
            return self.law.inverse_at(args[0])
        raise ExprError(f"unknown function {name!r}", pos)


def evaluate(text, env, law, context) -> Series:
    """Evaluate `text` to a series over `context` with names bound by `env`."""
    return _Parser(text, env, law, context).parse()
