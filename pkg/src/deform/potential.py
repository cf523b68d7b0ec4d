"""Potential construction: F with dF = omega.

The symbolic route follows the integrate-and-match procedure: integrate M
in x, differentiate in y, match against N, integrate the remainder in y.
When the rule-based integrator has no applicable rule, the numeric route
integrates omega along axis-aligned two-segment paths from a base point,
detouring around exclusion disks on deterministic circular arcs. For exact
forms the value is path independent, so the particular path choice is
immaterial; the constant is normalized by F(base) = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cohomology import (DEFAULT_RTOL, EXACT, Loop, classify, default_loop,
                         integrate_path)
from .errors import (ComputationError, PathError, PreconditionError,
                     SamplingError)
from .expr import (Add, Expr, Sub, diff, evaluate, evaluate_many,
                   integrate_symbolic, simplify, to_source)
from .forms import OneForm
from .geometry import Domain, domain_samples, paired_samples

_FD_STEP = 1e-5


@dataclass
class SymbolicPotential:
    """Closed-form potential; the integration constant is dropped."""

    f: Expr
    residual: Optional[float] = None

    kind = "symbolic"
    normalization = "integration constant dropped"

    def value(self, p) -> float:
        return evaluate(self.f, p)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "F": to_source(self.f),
            "residual": self.residual,
            "normalization": self.normalization,
        }


class NumericPotential:
    """Path-integral potential with F(base) = 0.

    Values are cached per target point; the cache is a plain dict, safe
    for concurrent lookups of already-computed values.
    """

    kind = "numeric"
    normalization = "F(base)=0"

    def __init__(self, w: OneForm, u: Domain, base, rtol: float = DEFAULT_RTOL):
        base = (float(base[0]), float(base[1]))
        if not u.contains(*base):
            raise PreconditionError(
                f"base point {base} is outside the domain or inside an "
                "exclusion disk")
        self.w = w
        self.u = u
        self.base = base
        self.rtol = rtol
        self.residual: Optional[float] = None
        self._cache = {base: 0.0}

    def value(self, p) -> float:
        p = (float(p[0]), float(p[1]))
        cached = self._cache.get(p)
        if cached is not None:
            return cached
        if not self.u.contains(*p):
            raise PathError(f"target point {p} is outside the domain or "
                            "inside an exclusion disk")
        total = 0.0
        corner = (p[0], self.base[1])
        for a, b in ((self.base, corner), (corner, p)):
            if a == b:
                continue
            for piece in _route_segment(self.u, a, b):
                total += _integrate_piece(self.w, piece, self.rtol)
        self._cache[p] = total
        return total

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "base": [self.base[0], self.base[1]],
            "residual": self.residual,
            "normalization": self.normalization,
        }


# --- path routing -------------------------------------------------------

def _route_segment(u: Domain, a, b):
    """Split a straight segment into segments and circular detour arcs so
    the path clears every exclusion disk.

    The detour radius is 2*exclusion_radius, shrunk when an endpoint sits
    closer to the puncture than that; the shorter arc is taken, ties going
    counterclockwise.
    """
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    seg_len2 = dx * dx + dy * dy
    blockers = []
    for q in u.punctures:
        qx, qy = q
        t_star = ((qx - ax) * dx + (qy - ay) * dy) / seg_len2
        t_star = min(1.0, max(0.0, t_star))
        px, py = ax + t_star * dx, ay + t_star * dy
        closest = math.hypot(px - qx, py - qy)
        da = math.hypot(ax - qx, ay - qy)
        db = math.hypot(bx - qx, by - qy)
        radius = min(2.0 * u.exclusion_radius, 0.999999 * min(da, db))
        if radius <= u.exclusion_radius:
            raise PathError(
                f"path endpoint too close to puncture {q}",
                blocking_puncture=q)
        if closest >= radius * (1.0 - 1e-12):
            continue
        # segment/circle intersection: |a + t d - q|^2 = radius^2
        fx, fy = ax - qx, ay - qy
        half_b = fx * dx + fy * dy
        c = fx * fx + fy * fy - radius * radius
        disc = half_b * half_b - seg_len2 * c
        if disc <= 0.0:
            continue
        sq = math.sqrt(disc)
        t1 = (-half_b - sq) / seg_len2
        t2 = (-half_b + sq) / seg_len2
        blockers.append((t1, t2, q, radius))
    blockers.sort()
    for i in range(1, len(blockers)):
        if blockers[i][0] < blockers[i - 1][1]:
            raise PathError("overlapping detours; punctures too close",
                            blocking_puncture=blockers[i][2])
    pieces = []
    cursor = a
    for t1, t2, q, radius in blockers:
        entry = (ax + t1 * dx, ay + t1 * dy)
        exit_ = (ax + t2 * dx, ay + t2 * dy)
        if cursor != entry:
            pieces.append(("seg", cursor, entry))
        th1 = math.atan2(entry[1] - q[1], entry[0] - q[0])
        th2 = math.atan2(exit_[1] - q[1], exit_[0] - q[0])
        dth = math.remainder(th2 - th1, 2.0 * math.pi)
        if abs(abs(dth) - math.pi) < 1e-12:
            dth = math.pi  # diametral crossing: tie goes counterclockwise
        pieces.append(("arc", q, radius, th1, dth))
        cursor = exit_
    if cursor != b:
        pieces.append(("seg", cursor, b))
    return pieces


def _integrate_piece(w: OneForm, piece, rtol: float) -> float:
    if piece[0] == "seg":
        _, a, b = piece
        ax, ay = a
        dx, dy = b[0] - ax, b[1] - ay

        def seg_points(ts):
            ones = np.ones_like(ts)
            return (ax + ts * dx, ay + ts * dy, dx * ones, dy * ones)

        return integrate_path(w, seg_points, 0.0, 1.0, rtol)
    _, q, radius, th1, dth = piece

    def arc_points(ts):
        th = th1 + ts * dth
        xs = q[0] + radius * np.cos(th)
        ys = q[1] + radius * np.sin(th)
        return (xs, ys, -radius * dth * np.sin(th),
                radius * dth * np.cos(th))

    return integrate_path(w, arc_points, 0.0, 1.0, rtol)


# --- construction -------------------------------------------------------

def potential_symbolic(w: OneForm,
                       u: Optional[Domain] = None) -> Optional[SymbolicPotential]:
    """Integrate-and-match construction; None when the rule set does not
    cover the integrals (callers fall back to the numeric route).

    The matching remainder N - d/dy(int M dx) must be x-free; that is
    checked by sampling over the working domain. The caller is responsible
    for only feeding closed forms.
    """
    if u is None:
        u = Domain((-2.0, 2.0, -2.0, 2.0))
    p = integrate_symbolic(w.m, "x")
    if p is None:
        return None
    remainder = simplify(Sub(w.n, diff(p, "y")))
    xs1, ys1, xs2, ys2 = paired_samples(u, 64, vary="x")
    r1, ok1 = evaluate_many(remainder, xs1, ys1)
    r2, ok2 = evaluate_many(remainder, xs2, ys2)
    mask = ok1 & ok2
    if mask.sum() < 4:
        return None
    scale_r = 1.0 + max(np.abs(r1[mask]).max(), np.abs(r2[mask]).max())
    if np.abs(r1[mask] - r2[mask]).max() > 1e-8 * scale_r:
        return None
    q = integrate_symbolic(remainder, "y")
    if q is None:
        return None
    return SymbolicPotential(simplify(Add(p, q)))


def potential_numeric(w: OneForm, u: Domain, base,
                      rtol: float = DEFAULT_RTOL) -> NumericPotential:
    """Path-integral potential from the base point; callers must have
    classified w as exact on u, otherwise the values are path dependent."""
    return NumericPotential(w, u, base, rtol)


def verify_potential(f, w: OneForm, u: Domain, n: int = 100) -> float:
    """max over samples of |F_x - M| and |F_y - N|.

    Symbolic potentials are differentiated symbolically; numeric ones via
    central finite differences with step 1e-5. The result is recorded on
    the potential object.
    """
    if isinstance(f, SymbolicPotential):
        xs, ys = domain_samples(u, n)
        fx, fy = diff(f.f, "x"), diff(f.f, "y")
        fxv, ok1 = evaluate_many(fx, xs, ys)
        fyv, ok2 = evaluate_many(fy, xs, ys)
        mv, ok3 = evaluate_many(w.m, xs, ys)
        nv, ok4 = evaluate_many(w.n, xs, ys)
        mask = ok1 & ok2 & ok3 & ok4
        if not mask.any():
            raise SamplingError("no valid samples for potential check")
        residual = float(max(np.abs(fxv[mask] - mv[mask]).max(),
                             np.abs(fyv[mask] - nv[mask]).max()))
    else:
        xs, ys = domain_samples(u, max(4 * n, 64))
        h = _FD_STEP
        residual = 0.0
        checked = 0
        for x, y in zip(xs, ys):
            if checked >= n:
                break
            if not (u.contains(x - h, y) and u.contains(x + h, y)
                    and u.contains(x, y - h) and u.contains(x, y + h)):
                continue
            try:
                fd_x = (f.value((x + h, y)) - f.value((x - h, y))) / (2 * h)
                fd_y = (f.value((x, y + h)) - f.value((x, y - h))) / (2 * h)
                mv = evaluate(w.m, (x, y))
                nv = evaluate(w.n, (x, y))
            except Exception:
                continue
            residual = max(residual, abs(fd_x - mv), abs(fd_y - nv))
            checked += 1
        if checked == 0:
            raise SamplingError("no valid samples for potential check")
    f.residual = residual
    return residual


def uniqueness_check(w: OneForm, u: Domain, base1, base2, n: int = 16,
                     tol: float = 1e-8) -> bool:
    """Potentials from two bases must differ by a constant (sampled
    standard deviation of the difference <= tol). Refuses non-exact
    forms."""
    outcome = classify(w, u)
    if outcome.kind != EXACT:
        raise PreconditionError(
            f"uniqueness check requires an exact form, got {outcome.kind}")
    f1 = potential_numeric(w, u, base1)
    f2 = potential_numeric(w, u, base2)
    xs, ys = domain_samples(u, n)
    diffs = []
    for x, y in zip(xs, ys):
        try:
            diffs.append(f1.value((x, y)) - f2.value((x, y)))
        except ComputationError:
            continue
    if len(diffs) < 2:
        raise SamplingError("fewer than 2 evaluable sample points")
    return bool(np.std(diffs) <= tol)


def transport_change(w: OneForm, loop: Loop, rtol: float = DEFAULT_RTOL,
                     legs: int = 8) -> float:
    """Change of a locally-built potential transported once around the
    loop: the integral accumulated over consecutive sub-arcs. Equals the
    period for closed forms; quantifies multi-valued behavior."""
    cx, cy = loop.center
    r = loop.radius
    s = loop.orientation

    def circle(ts):
        th = s * ts
        xs = cx + r * np.cos(th)
        ys = cy + r * np.sin(th)
        return xs, ys, -r * s * np.sin(th), r * s * np.cos(th)

    total = 0.0
    edges = np.linspace(0.0, 2.0 * math.pi, legs + 1)
    for t0, t1 in zip(edges[:-1], edges[1:]):
        total += integrate_path(w, circle, float(t0), float(t1), rtol)
    return total


def default_base_point(w: OneForm, u: Domain):
    """Deterministic admissible base: the first Halton sample where both
    components of the form evaluate."""
    xs, ys = domain_samples(u, 64)
    mv, ok1 = evaluate_many(w.m, xs, ys)
    nv, ok2 = evaluate_many(w.n, xs, ys)
    mask = ok1 & ok2
    for x, y, good in zip(xs, ys, mask):
        if good:
            return (float(x), float(y))
    raise SamplingError("no admissible base point found")
