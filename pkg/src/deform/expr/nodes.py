"""Immutable expression trees in the variables x and y.

Nodes are frozen dataclasses, so structural equality and hashing come for
free and trees can be shared freely between threads. Constants are plain
IEEE doubles; rational literals are folded to doubles at parse time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

VARIABLES = ("x", "y")
FUNCTIONS = ("sin", "cos", "exp", "log", "atan", "sqrt")


class Expr:
    """Base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        v = float(self.value) + 0.0  # normalizes -0.0
        if not math.isfinite(v):
            raise ValueError("constants must be finite")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def __post_init__(self):
        if self.name not in VARIABLES:
            raise ValueError(f"unknown variable {self.name!r}")


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise ValueError(f"unknown function {self.fn!r}")


X = Var("x")
Y = Var("y")
ZERO = Const(0.0)
ONE = Const(1.0)


def const(v: float) -> Const:
    return Const(float(v))


def contains_var(e: Expr, name: str) -> bool:
    """True if the variable occurs anywhere in the tree."""
    if isinstance(e, Var):
        return e.name == name
    if isinstance(e, Const):
        return False
    if isinstance(e, Neg):
        return contains_var(e.arg, name)
    if isinstance(e, Call):
        return contains_var(e.arg, name)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return contains_var(e.left, name) or contains_var(e.right, name)
    if isinstance(e, Pow):
        return contains_var(e.base, name) or contains_var(e.exponent, name)
    raise TypeError(f"not an Expr: {e!r}")


def is_variable_free(e: Expr) -> bool:
    return not contains_var(e, "x") and not contains_var(e, "y")
