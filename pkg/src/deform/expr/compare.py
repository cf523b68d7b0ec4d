"""Sampled comparison of expressions modulo an additive constant."""
from __future__ import annotations

import numpy as np

from ..errors import SamplingError
from ..geometry import Domain, domain_samples
from .evaluate import evaluate_many
from .nodes import Expr


def equal_up_to_constant(a: Expr, b: Expr, region: Domain, n: int = 100,
                         tol: float = 1e-9) -> bool:
    """True iff a - b has sample standard deviation <= tol over the region.

    Needs at least two sample points where both expressions are defined.
    """
    xs, ys = domain_samples(region, n)
    va, ok_a = evaluate_many(a, xs, ys)
    vb, ok_b = evaluate_many(b, xs, ys)
    mask = ok_a & ok_b
    if mask.sum() < 2:
        raise SamplingError(
            "fewer than 2 sample points where both expressions are defined")
    return bool(np.std(va[mask] - vb[mask]) <= tol)
