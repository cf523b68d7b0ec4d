"""Planar 1-forms M dx + N dy and the closedness test.

Closedness is decided numerically: the scalar coefficient of the exterior
derivative is sampled at quasi-random domain points and compared against an
absolute tolerance. A symbolic simplify-to-zero result short-circuits the
sampling as a fast accept, but never the other way around.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import SamplingError
from .expr import (Const, Expr, Mul, Sub, diff, evaluate, evaluate_many,
                   parse, simplify, to_source)
from .geometry import Domain, domain_samples

DEFAULT_CLOSEDNESS_TOL = 1e-10
DEFAULT_SAMPLE_COUNT = 256

ExprLike = Union[Expr, str]


def _as_expr(e: ExprLike) -> Expr:
    return parse(e) if isinstance(e, str) else e


@dataclass(frozen=True)
class OneForm:
    """The 1-form m dx + n dy."""

    m: Expr
    n: Expr

    def to_json_dict(self) -> dict:
        return {"M": to_source(self.m), "N": to_source(self.n)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "OneForm":
        return cls(parse(d["M"]), parse(d["N"]))


def one_form(m: ExprLike, n: ExprLike) -> OneForm:
    """Build a OneForm from expressions or grammar strings."""
    return OneForm(_as_expr(m), _as_expr(n))


def d_coefficient(w: OneForm) -> Expr:
    """Scalar coefficient of d(omega) = (dN/dx - dM/dy) dx^dy."""
    return simplify(Sub(diff(w.n, "x"), diff(w.m, "y")))


class ClosednessResult(NamedTuple):
    closed: bool
    residual: float
    samples_used: int


def is_closed(w: OneForm, u: Domain, n: int = DEFAULT_SAMPLE_COUNT,
              tol: float = DEFAULT_CLOSEDNESS_TOL) -> ClosednessResult:
    """Sample |dN/dx - dM/dy| over the domain; closed iff the max is <= tol.

    Points where the coefficient is undefined (singular sets of measure
    zero) are skipped; SamplingError is raised only when no point at all
    can be evaluated.
    """
    coeff = d_coefficient(w)
    if coeff == Const(0.0):
        return ClosednessResult(True, 0.0, 0)
    xs, ys = domain_samples(u, n)
    values, valid = evaluate_many(coeff, xs, ys)
    if not valid.any():
        raise SamplingError(
            "exterior-derivative coefficient undefined at every sample")
    residual = float(np.max(np.abs(values[valid])))
    return ClosednessResult(residual <= tol, residual, int(valid.sum()))


def scale(w: OneForm, mu: ExprLike) -> OneForm:
    """The rescaled form mu*omega, components simplified."""
    mu = _as_expr(mu)
    return OneForm(simplify(Mul(mu, w.m)), simplify(Mul(mu, w.n)))


def pullback_integrand(w: OneForm, gamma, t: float) -> float:
    """M(gamma(t)) x'(t) + N(gamma(t)) y'(t) for a parametrized loop."""
    x, y = gamma.point(t)
    dx, dy = gamma.velocity(t)
    return evaluate(w.m, (x, y)) * dx + evaluate(w.n, (x, y)) * dy
