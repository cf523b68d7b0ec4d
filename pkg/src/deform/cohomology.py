"""Loop integrals, period vectors over punctures, exactness classification.

On a rectangle minus k points the first de Rham cohomology is generated by
one counterclockwise cycle per puncture, so a closed form is exact exactly
when all k puncture periods vanish. Periods are computed with composite
16-node Gauss-Legendre panels, doubling the panel count until the change
between refinement levels drops below the requested tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import PreconditionError, QuadratureError
from .expr import evaluate_many
from .forms import (DEFAULT_CLOSEDNESS_TOL, DEFAULT_SAMPLE_COUNT, OneForm,
                    is_closed)
from .geometry import Domain

DEFAULT_RTOL = 1e-10
_NODES_PER_PANEL = 16
_INITIAL_PANELS = 8
_MAX_PANELS = 2 ** 14

_GL_NODES, _GL_WEIGHTS = leggauss(_NODES_PER_PANEL)


@dataclass(frozen=True)
class Loop:
    """Circle gamma(t) = center + radius*(cos t, sin t), t in [0, 2*pi].

    orientation +1 is counterclockwise; -1 traverses the same circle
    clockwise (the parametrization runs through t -> -t).
    """

    center: tuple[float, float]
    radius: float
    orientation: int = 1

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("loop radius must be positive")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    def point(self, t: float):
        s = self.orientation * t
        return (self.center[0] + self.radius * math.cos(s),
                self.center[1] + self.radius * math.sin(s))

    def velocity(self, t: float):
        s = self.orientation * t
        return (-self.radius * self.orientation * math.sin(s),
                self.radius * self.orientation * math.cos(s))

    def reversed(self) -> "Loop":
        return Loop(self.center, self.radius, -self.orientation)


def default_loop(u: Domain, puncture) -> Loop:
    """Counterclockwise circle of radius 2*exclusion_radius; the Domain
    invariants guarantee it fits inside the rectangle and clears every
    other exclusion disk."""
    return Loop((float(puncture[0]), float(puncture[1])),
                2.0 * u.exclusion_radius, 1)


def integrate_path(w: OneForm, path_points, t0: float, t1: float,
                   rtol: float = DEFAULT_RTOL) -> float:
    """Adaptive composite Gauss-Legendre integral of the pullback of w.

    path_points maps an array of parameters to (xs, ys, dxs, dys) arrays.
    Panels double from the initial count until the change between levels
    is <= rtol * max(1, |I|); the floor keeps the stop criterion usable
    for integrals that are themselves zero.
    """
    def level(panels: int) -> float:
        edges = np.linspace(t0, t1, panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        ts = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
        weights = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
        xs, ys, dxs, dys = path_points(ts)
        mv, mok = evaluate_many(w.m, xs, ys)
        nv, nok = evaluate_many(w.n, xs, ys)
        if not (mok.all() and nok.all()):
            raise QuadratureError(
                "form undefined on the integration path")
        return float(np.sum(weights * (mv * dxs + nv * dys)))

    panels = _INITIAL_PANELS
    previous = level(panels)
    while panels <= _MAX_PANELS:
        panels *= 2
        current = level(panels)
        if abs(current - previous) <= rtol * max(1.0, abs(current)):
            return current
        previous = current
    raise QuadratureError(
        f"quadrature did not converge within {_MAX_PANELS} panels")


def _circle_path(loop: Loop):
    cx, cy = loop.center
    r = loop.radius

    def points(ts):
        xs = cx + r * np.cos(ts)
        ys = cy + r * np.sin(ts)
        return xs, ys, -r * np.sin(ts), r * np.cos(ts)

    return points


def line_integral(w: OneForm, gamma: Loop,
                  rtol: float = DEFAULT_RTOL) -> float:
    """Integral of w over the loop.

    The quadrature always runs over the counterclockwise parametrization;
    orientation enters as a sign, so reversing a loop negates the result
    exactly.
    """
    value = integrate_path(w, _circle_path(Loop(gamma.center, gamma.radius)),
                           0.0, 2.0 * math.pi, rtol)
    return gamma.orientation * value


@dataclass(frozen=True)
class PeriodVector:
    """One loop integral per puncture, in the domain's puncture order."""

    entries: tuple[tuple[tuple[float, float], float], ...]
    rtol: float

    def values(self):
        return [v for _, v in self.entries]

    def max_abs(self) -> float:
        return max((abs(v) for v in self.values()), default=0.0)

    def to_json_dict(self) -> dict:
        return {
            "periods": [{"puncture": [p[0], p[1]], "value": v}
                        for p, v in self.entries],
            "rtol": self.rtol,
        }


def periods(w: OneForm, u: Domain, rtol: float = DEFAULT_RTOL,
            closedness_tol: float = DEFAULT_CLOSEDNESS_TOL,
            samples: int = DEFAULT_SAMPLE_COUNT) -> PeriodVector:
    """Line integrals over the default loop around each puncture.

    Refuses non-closed forms: their loop integrals are not homotopy
    invariants, so a period vector would be meaningless.
    """
    closed = is_closed(w, u, samples, closedness_tol)
    if not closed.closed:
        raise PreconditionError(
            "periods are defined for closed forms only; max residual "
            f"{closed.residual:.3e} exceeds {closedness_tol:.3e}")
    entries = []
    for p in u.punctures:
        value = line_integral(w, default_loop(u, p), rtol)
        entries.append((p, value))
    return PeriodVector(tuple(entries), rtol)


EXACT = "exact"
CLOSED_NOT_EXACT = "closed_not_exact"
NOT_CLOSED = "not_closed"


@dataclass(frozen=True)
class Classification:
    """Outcome of the exactness decision, with its diagnostics.

    period_threshold is the closedness tolerance scaled by the default
    loop circumference, so both gates of the classifier share one
    tolerance story.
    """

    kind: str
    residual: float
    periods: Optional[PeriodVector]
    period_threshold: Optional[float]

    def __post_init__(self):
        if self.kind not in (EXACT, CLOSED_NOT_EXACT, NOT_CLOSED):
            raise ValueError(f"unknown classification kind {self.kind!r}")
        if self.kind == EXACT and self.periods is not None:
            assert self.periods.max_abs() <= self.period_threshold
        if self.kind == CLOSED_NOT_EXACT:
            assert self.periods is not None
            assert self.periods.max_abs() > self.period_threshold

    @property
    def max_abs_period(self) -> Optional[float]:
        return None if self.periods is None else self.periods.max_abs()

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "residual": self.residual,
            "periods": None if self.periods is None
            else self.periods.to_json_dict(),
        }


def classify(w: OneForm, u: Domain, tol: float = DEFAULT_CLOSEDNESS_TOL,
             rtol: Optional[float] = None,
             samples: int = DEFAULT_SAMPLE_COUNT) -> Classification:
    """NotClosed / ClosedNotExact / Exact decision for w on u."""
    if rtol is None:
        rtol = tol
    closed = is_closed(w, u, samples, tol)
    if not closed.closed:
        return Classification(NOT_CLOSED, closed.residual, None, None)
    pv = periods(w, u, rtol, tol, samples)
    circumference = 2.0 * math.pi * 2.0 * u.exclusion_radius
    threshold = max(tol * circumference, 1e-15)
    if pv.max_abs() > threshold:
        return Classification(CLOSED_NOT_EXACT, closed.residual, pv,
                              threshold)
    return Classification(EXACT, closed.residual, pv, threshold)
