"""Compiled evaluation of expression trees.

Trees are translated once into Python source and compiled, then cached, so
repeated evaluation (quadrature, sampling, curve tracing) runs at native
lambda speed. Two back ends:

  evaluate(e, p)            scalar, raises on domain errors / non-finite
  evaluate_many(e, xs, ys)  vectorized over numpy arrays, returns a validity
                            mask instead of raising (invalid points are the
                            caller's business to skip or report)

math.pow is used for scalar powers: unlike the ** operator it raises
ValueError for negative bases with fractional exponents instead of
returning a complex number.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..errors import EvaluationError, NonFiniteError
from .nodes import Add, Call, Const, Div, Expr, Mul, Neg, Pow, Sub, Var

_SCALAR_FUNCS = {
    "sin": "_m.sin", "cos": "_m.cos", "exp": "_m.exp",
    "log": "_m.log", "atan": "_m.atan", "sqrt": "_m.sqrt",
}
_ARRAY_FUNCS = {
    "sin": "_np.sin", "cos": "_np.cos", "exp": "_np.exp",
    "log": "_np.log", "atan": "_np.arctan", "sqrt": "_np.sqrt",
}


def _source(e: Expr, funcs, pow_fmt: str) -> str:
    def rec(e):
        if isinstance(e, Const):
            return repr(e.value)
        if isinstance(e, Var):
            return e.name
        if isinstance(e, Neg):
            return f"(-{rec(e.arg)})"
        if isinstance(e, Add):
            return f"({rec(e.left)} + {rec(e.right)})"
        if isinstance(e, Sub):
            return f"({rec(e.left)} - {rec(e.right)})"
        if isinstance(e, Mul):
            return f"({rec(e.left)} * {rec(e.right)})"
        if isinstance(e, Div):
            return f"({rec(e.left)} / {rec(e.right)})"
        if isinstance(e, Pow):
            return pow_fmt.format(rec(e.base), rec(e.exponent))
        if isinstance(e, Call):
            return f"{funcs[e.fn]}({rec(e.arg)})"
        raise TypeError(f"not an Expr: {e!r}")

    return rec(e)


@lru_cache(maxsize=1024)
def _scalar_fn(e: Expr):
    src = "lambda x, y: " + _source(e, _SCALAR_FUNCS, "_m.pow({}, {})")
    return eval(src, {"_m": math, "__builtins__": {}})


@lru_cache(maxsize=1024)
def _array_fn(e: Expr):
    src = "lambda x, y: " + _source(e, _ARRAY_FUNCS, "_np.power({}, {})")
    return eval(src, {"_np": np, "__builtins__": {}})


def evaluate(e: Expr, point) -> float:
    """Value of e at point=(x, y) in IEEE double precision.

    Raises EvaluationError at points outside the definition domain
    (division by zero, log of a non-positive number, even root of a
    negative) and NonFiniteError on overflow.
    """
    x, y = point
    try:
        v = _scalar_fn(e)(float(x), float(y))
    except (ValueError, ZeroDivisionError) as exc:
        raise EvaluationError(f"domain error at ({x}, {y}): {exc}") from None
    except OverflowError:
        raise NonFiniteError(f"overflow at ({x}, {y})") from None
    if not math.isfinite(v):
        raise NonFiniteError(f"non-finite value at ({x}, {y})")
    return v


def evaluate_many(e: Expr, xs: np.ndarray, ys: np.ndarray):
    """Vectorized evaluation.

    Returns (values, valid) where valid marks points at which the value is
    finite and the expression defined; values at invalid points are
    unspecified.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    try:
        with np.errstate(all="ignore"):
            v = _array_fn(e)(xs, ys)
    except (ZeroDivisionError, ValueError, OverflowError):
        # a constant subexpression is undefined; so is the whole tree
        nan = np.full(xs.shape, np.nan)
        return nan, np.zeros(xs.shape, dtype=bool)
    v = np.asarray(v, dtype=float)
    if v.shape != xs.shape:
        v = np.broadcast_to(v, xs.shape).copy()
    return v, np.isfinite(v)
