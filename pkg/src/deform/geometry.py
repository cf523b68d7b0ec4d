"""Planar domains: an open axis-aligned rectangle minus a finite set of
punctures, plus deterministic low-discrepancy sampling over them.

Sample points come from an unscrambled Halton sequence (index 0 is skipped
since it maps to a rectangle corner), filtered against the exclusion disks
around punctures. The sequence is fixed, so every report that depends on
sampling is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .errors import DomainError, SamplingError

DEFAULT_EXCLUSION_RADIUS = 0.1


@dataclass(frozen=True)
class Domain:
    """Open rectangle (xmin, xmax) x (ymin, ymax) minus punctures.

    Punctures must be pairwise at least 4*exclusion_radius apart and at
    least 2*exclusion_radius from the rectangle boundary, so the default
    loops of radius 2*exclusion_radius fit inside the domain.
    """

    rect: tuple[float, float, float, float]
    punctures: tuple[tuple[float, float], ...] = ()
    exclusion_radius: float = DEFAULT_EXCLUSION_RADIUS

    def __post_init__(self):
        rect = tuple(float(v) for v in self.rect)
        if len(rect) != 4:
            raise DomainError("rect must be (xmin, xmax, ymin, ymax)")
        xmin, xmax, ymin, ymax = rect
        if not (xmin < xmax and ymin < ymax):
            raise DomainError("rect must satisfy xmin<xmax and ymin<ymax")
        r = float(self.exclusion_radius)
        if not r > 0:
            raise DomainError("exclusion_radius must be positive")
        punctures = tuple((float(p[0]), float(p[1])) for p in self.punctures)
        for px, py in punctures:
            if not (xmin < px < xmax and ymin < py < ymax):
                raise DomainError(f"puncture ({px}, {py}) not inside rect")
            to_edge = min(px - xmin, xmax - px, py - ymin, ymax - py)
            if to_edge < 2.0 * r:
                raise DomainError(
                    f"puncture ({px}, {py}) closer than 2*exclusion_radius "
                    "to the rectangle boundary")
        for i in range(len(punctures)):
            for j in range(i + 1, len(punctures)):
                dx = punctures[i][0] - punctures[j][0]
                dy = punctures[i][1] - punctures[j][1]
                if (dx * dx + dy * dy) ** 0.5 < 4.0 * r:
                    raise DomainError(
                        "punctures closer than 4*exclusion_radius apart")
        object.__setattr__(self, "rect", rect)
        object.__setattr__(self, "punctures", punctures)
        object.__setattr__(self, "exclusion_radius", r)

    @property
    def width(self) -> float:
        return self.rect[1] - self.rect[0]

    @property
    def height(self) -> float:
        return self.rect[3] - self.rect[2]

    def contains(self, x: float, y: float, margin: float = 0.0) -> bool:
        """Point strictly inside the rectangle and outside every exclusion
        disk (enlarged by margin)."""
        xmin, xmax, ymin, ymax = self.rect
        if not (xmin < x < xmax and ymin < y < ymax):
            return False
        keep = self.exclusion_radius + margin
        for px, py in self.punctures:
            if (x - px) ** 2 + (y - py) ** 2 <= keep * keep:
                return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "rect": list(self.rect),
            "punctures": [list(p) for p in self.punctures],
            "exclusion_radius": self.exclusion_radius,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Domain":
        return cls(
            rect=tuple(d["rect"]),
            punctures=tuple(tuple(p) for p in d.get("punctures", ())),
            exclusion_radius=d.get("exclusion_radius",
                                   DEFAULT_EXCLUSION_RADIUS),
        )


def _puncture_mask(domain: Domain, xs: np.ndarray, ys: np.ndarray):
    keep = np.ones(xs.shape, dtype=bool)
    r2 = domain.exclusion_radius ** 2
    for px, py in domain.punctures:
        keep &= (xs - px) ** 2 + (ys - py) ** 2 > r2
    return keep

def domain_samples(domain: Domain, n: int, oversample: int = 10):
    """First n admissible Halton points in the domain, as (xs, ys) arrays.

    Points landing in exclusion disks are dropped and replaced, drawing at
    most oversample*n candidates. Raises SamplingError when no admissible
    point exists at all.
    """
    xmin, xmax, ymin, ymax = domain.rect
    engine = qmc.Halton(d=2, scramble=False)
    engine.fast_forward(1)  # index 0 is (0, 0): a rectangle corner
    xs_out, ys_out = [], []
    drawn = 0
    while len(xs_out) < n and drawn < oversample * n:
        batch = engine.random(n)
        drawn += n
        xs = xmin + (xmax - xmin) * batch[:, 0]
        ys = ymin + (ymax - ymin) * batch[:, 1]
        keep = _puncture_mask(domain, xs, ys)
        xs_out.extend(xs[keep])
        ys_out.extend(ys[keep])
    if not xs_out:
        raise SamplingError("no admissible sample points in domain")
    return np.array(xs_out[:n]), np.array(ys_out[:n])


def paired_samples(domain: Domain, n: int, vary: str):
    """Sample pairs that differ only in one coordinate.

    Returns (xs, ys, xs2, ys2): the second point mirrors the varied
    coordinate across the rectangle midline, keeping the other coordinate
    fixed. Used for one-variable-dependence checks. Pairs whose mirror
    lands in an exclusion disk are dropped.
    """
    xmin, xmax, ymin, ymax = domain.rect
    xs, ys = domain_samples(domain, n)
    if vary == "x":
        xs2, ys2 = (xmin + xmax) - xs, ys.copy()
    elif vary == "y":
        xs2, ys2 = xs.copy(), (ymin + ymax) - ys
    else:
        raise ValueError("vary must be 'x' or 'y'")
    keep = _puncture_mask(domain, xs2, ys2)
    # drop degenerate pairs where the mirror coincides with the original
    if vary == "x":
        keep &= np.abs(xs2 - xs) > 1e-9 * (xmax - xmin)
    else:
        keep &= np.abs(ys2 - ys) > 1e-9 * (ymax - ymin)
    return xs[keep], ys[keep], xs2[keep], ys2[keep]
