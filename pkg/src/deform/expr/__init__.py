"""Symbolic expression kernel: parse, print, evaluate, differentiate,
simplify, integrate, and compare expressions in the variables x and y."""

from .calculus import diff, integrate_symbolic
from .compare import equal_up_to_constant
from .evaluate import evaluate, evaluate_many
from .nodes import (Add, Call, Const, Div, Expr, FUNCTIONS, Mul, Neg, ONE,
                    Pow, Sub, VARIABLES, Var, X, Y, ZERO, const,
                    contains_var, is_variable_free)
from .parser import parse
from .printer import to_source
from .simplify import simplify

__all__ = [
    "Add", "Call", "Const", "Div", "Expr", "FUNCTIONS", "Mul", "Neg", "ONE",
    "Pow", "Sub", "VARIABLES", "Var", "X", "Y", "ZERO", "const",
    "contains_var", "diff", "equal_up_to_constant", "evaluate",
    "evaluate_many", "integrate_symbolic", "is_variable_free", "parse",
    "simplify", "to_source",
]
