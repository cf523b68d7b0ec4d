"""Precedence-aware printing with minimal parentheses.

parse(to_source(e)) is structurally equal to e for every tree the parser or
the simplifier can produce (negative literals print as signed numbers and
re-fold on parse).
"""
from __future__ import annotations

from .nodes import Add, Call, Const, Div, Expr, Mul, Neg, Pow, Sub, Var

_ADD, _MUL, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5


def _fmt_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _prec(e: Expr) -> int:
    if isinstance(e, Const):
        return _UNARY if e.value < 0 else _ATOM
    if isinstance(e, (Var, Call)):
        return _ATOM
    if isinstance(e, Neg):
        return _UNARY
    if isinstance(e, Pow):
        return _POW
    if isinstance(e, (Mul, Div)):
        return _MUL
    return _ADD


def _p(e: Expr, min_prec: int) -> str:
    s = _render(e)
    if _prec(e) < min_prec:
        return f"({s})"
    return s


def _render(e: Expr) -> str:
    if isinstance(e, Const):
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return "-" + _p(e.arg, _UNARY)
    if isinstance(e, Add):
        return f"{_p(e.left, _ADD)} + {_p(e.right, _ADD + 1)}"
    if isinstance(e, Sub):
        return f"{_p(e.left, _ADD)} - {_p(e.right, _ADD + 1)}"
    if isinstance(e, Mul):
        return f"{_p(e.left, _MUL)}*{_p(e.right, _MUL + 1)}"
    if isinstance(e, Div):
        return f"{_p(e.left, _MUL)}/{_p(e.right, _MUL + 1)}"
    if isinstance(e, Pow):
        return f"{_p(e.base, _ATOM)}^{_p(e.exponent, _UNARY)}"
    if isinstance(e, Call):
        return f"{e.fn}({_p(e.arg, 0)})"
    raise TypeError(f"not an Expr: {e!r}")


def to_source(e: Expr) -> str:
    """Render the tree in the expression grammar."""
    return _p(e, 0)
