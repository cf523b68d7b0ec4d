"""Recursive-descent parser for the expression grammar.

    expr    := term (('+'|'-') term)*
    term    := unary (('*'|'/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          right-associative
    atom    := NUMBER | 'x' | 'y' | FUNC '(' expr ')' | '(' expr ')'

'^' binds tighter than a unary minus applied to it, so "-x^2" is -(x^2).
A minus directly in front of a numeric literal folds into the constant, so
parse round-trips printed trees structurally.
"""
from __future__ import annotations

import re

from ..errors import ParseError
from .nodes import (Add, Call, Const, Div, Expr, FUNCTIONS, Mul, Neg, Pow,
                    Sub, VARIABLES, Var)

_TOKEN = re.compile(
    r"""(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op>[-+*/^()])
      | (?P<ws>\s+)
      | (?P<bad>.)""",
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", m.start())
        tokens.append((kind, m.group(), m.start()))
    return tokens


class _Stream:
    def __init__(self, tokens, text_len: int):
        self.tokens = tokens
        self.pos = 0
        self.text_len = text_len

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return (None, None, self.text_len)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok


def parse(text: str) -> Expr:
    """Parse expression text into the unique AST under the grammar rules."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 0)
    stream = _Stream(tokens, len(text))
    node = _expr(stream)
    kind, value, pos = stream.peek()
    if kind is not None:
        raise ParseError(f"unexpected token {value!r}", pos)
    return node


def _expr(s: _Stream) -> Expr:
    node = _term(s)
    while s.peek()[1] in ("+", "-"):
        op = s.next()[1]
        rhs = _term(s)
        node = Add(node, rhs) if op == "+" else Sub(node, rhs)
    return node


def _term(s: _Stream) -> Expr:
    node = _unary(s)
    while s.peek()[1] in ("*", "/"):
        op = s.next()[1]
        rhs = _unary(s)
        node = Mul(node, rhs) if op == "*" else Div(node, rhs)
    return node


def _unary(s: _Stream) -> Expr:
    if s.peek()[1] == "-":
        s.next()
        arg = _unary(s)
        if isinstance(arg, Const):
            return Const(-arg.value)
        return Neg(arg)
    return _power(s)


def _power(s: _Stream) -> Expr:
    base = _atom(s)
    if s.peek()[1] == "^":
        s.next()
        exponent = _unary(s)
        return Pow(base, exponent)
    return base


def _atom(s: _Stream) -> Expr:
    kind, value, pos = s.next()
    if kind == "num":
        return Const(float(value))
    if kind == "name":
        if value in VARIABLES:
            return Var(value)
        if value in FUNCTIONS:
            k, v, p = s.next()
            if v != "(":
                raise ParseError(f"expected '(' after {value!r}", p)
            arg = _expr(s)
            k, v, p = s.next()
            if v != ")":
                raise ParseError("expected ')'", p)
            return Call(value, arg)
        raise ParseError(f"unknown identifier {value!r}", pos)
    if value == "(":
        node = _expr(s)
        k, v, p = s.next()
        if v != ")":
            raise ParseError("expected ')'", p)
        return node
    if kind is None:
        raise ParseError("unexpected end of input", pos)
    raise ParseError(f"unexpected token {value!r}", pos)
