"""End-to-end analysis pipeline and integral-curve tracing.

analyze() chains classification, integrating-factor search, and potential
construction, then labels the outcome with a narrative tag:

  exact_global_solution            omega exact, potential built
  obstruction_multivalued          closed, nonvanishing puncture period
  factor_found_global_solution     mu found, mu*omega exact
  factor_found_obstruction_persists  mu found, mu*omega closed not exact
  unsolved_by_heuristics           not closed, ladder exhausted

The tag is a pure function of the report's own fields, asserted at
assembly time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .cohomology import (CLOSED_NOT_EXACT, Classification, EXACT, NOT_CLOSED,
                         classify)
from .errors import EvaluationError, PreconditionError
from .expr import evaluate, to_source
from .forms import OneForm
from .geometry import Domain
from .mu import MU_VERIFY_TOL, MuCandidate, find_integrating_factor
from .potential import (default_base_point, potential_numeric,
                        potential_symbolic, verify_potential)

TAG_EXACT = "exact_global_solution"
TAG_OBSTRUCTION = "obstruction_multivalued"
TAG_FACTOR_GLOBAL = "factor_found_global_solution"
TAG_FACTOR_OBSTRUCTION = "factor_found_obstruction_persists"
TAG_UNSOLVED = "unsolved_by_heuristics"


def narrative_tag(kind: str, factor_found: bool,
                  scaled_kind: Optional[str]) -> str:
    """Tag as a pure function of classification outcomes."""
    if kind == EXACT:
        return TAG_EXACT
    if kind == CLOSED_NOT_EXACT:
        return TAG_OBSTRUCTION
    if not factor_found:
        return TAG_UNSOLVED
    if scaled_kind == EXACT:
        return TAG_FACTOR_GLOBAL
    if scaled_kind == CLOSED_NOT_EXACT:
        return TAG_FACTOR_OBSTRUCTION
    return TAG_UNSOLVED


@dataclass
class AnalysisOptions:
    tol: float = 1e-10
    rtol: Optional[float] = None
    samples: int = 256
    potential_base: Optional[tuple] = None
    verify_samples: int = 100


@dataclass
class AnalysisReport:
    form: OneForm
    domain: Domain
    classification: Classification
    mu: Optional[MuCandidate]
    scaled_classification: Optional[Classification]
    potential: Optional[object]
    potential_solves: Optional[str]  # "omega" | "mu*omega"
    tag: str
    notes: list

    def __post_init__(self):
        expected = narrative_tag(
            self.classification.kind, self.mu is not None,
            self.scaled_classification.kind
            if self.scaled_classification else None)
        assert self.tag == expected, "narrative tag out of sync with fields"

    def to_json_dict(self) -> dict:
        periods = self.classification.periods
        potential = None
        if self.potential is not None:
            potential = self.potential.to_json_dict()
            potential["solves"] = self.potential_solves
        diagnostics = {
            "closedness_residual": self.classification.residual,
            "max_abs_period": self.classification.max_abs_period,
            "period_threshold": self.classification.period_threshold,
            "scaled_classification":
                None if self.scaled_classification is None
                else self.scaled_classification.to_json_dict(),
            "notes": list(self.notes),
        }
        return {
            "input": {
                "M": to_source(self.form.m),
                "N": to_source(self.form.n),
                "domain": self.domain.to_json_dict(),
            },
            "classification": self.classification.to_json_dict(),
            "mu": None if self.mu is None else self.mu.to_json_dict(),
            "potential": potential,
            "periods": None if periods is None else periods.to_json_dict(),
            "tag": self.tag,
            "diagnostics": diagnostics,
        }


def _build_potential(w: OneForm, u: Domain, opts: AnalysisOptions, notes):
    pot = potential_symbolic(w, u)
    if pot is None:
        base = opts.potential_base or default_base_point(w, u)
        pot = potential_numeric(w, u, base)
        notes.append("no symbolic antiderivative rule applied; numeric "
                     f"path-integral potential from base {base}")
        verify_potential(pot, w, u, min(opts.verify_samples, 24))
    else:
        verify_potential(pot, w, u, opts.verify_samples)
    return pot


def analyze(w: OneForm, u: Domain,
            opts: Optional[AnalysisOptions] = None) -> AnalysisReport:
    """Run the full pipeline on one form and assemble the report."""
    opts = opts or AnalysisOptions()
    notes: list = []
    outcome = classify(w, u, opts.tol, opts.rtol, opts.samples)
    mu_candidate = None
    scaled_outcome = None
    pot = None
    solves = None

    if outcome.kind == EXACT:
        pot = _build_potential(w, u, opts, notes)
        solves = "omega"
    elif outcome.kind == CLOSED_NOT_EXACT:
        notes.append("nonvanishing period: any local potential is "
                     "multi-valued around the puncture")
    else:
        found = find_integrating_factor(w, u, notes)
        if found is None:
            notes.append("integrating-factor ladder exhausted; the failure "
                         "is heuristic, not conclusive")
        else:
            mu_candidate, scaled = found
            # the candidate was verified at MU_VERIFY_TOL; classifying the
            # scaled form at a tighter tolerance would contradict the gate
            scaled_tol = max(opts.tol, MU_VERIFY_TOL)
            scaled_outcome = classify(scaled, u, scaled_tol, opts.rtol,
                                      opts.samples)
            if scaled_outcome.kind == EXACT:
                pot = _build_potential(scaled, u, opts, notes)
                solves = "mu*omega"
            elif scaled_outcome.kind == CLOSED_NOT_EXACT:
                notes.append("local integrating factor found, but the "
                             "topological obstruction persists")
            else:
                mu_candidate = None
                scaled_outcome = None
                notes.append("scaled form failed re-classification; "
                             "treating as unsolved")

    tag = narrative_tag(outcome.kind, mu_candidate is not None,
                        scaled_outcome.kind if scaled_outcome else None)
    return AnalysisReport(w, u, outcome, mu_candidate, scaled_outcome,
                          pot, solves, tag, notes)


# --- integral curves ----------------------------------------------------

LEFT_DOMAIN = "left_domain"
STEP_CAP = "step_cap"
SINGULAR = "singular_direction_field"


@dataclass
class CurveTrace:
    """Points (t, x, y, F) along one solution curve; F entries are None
    when no potential is available at that point."""

    points: list
    step: float
    termination: str


def _grid_seeds(u: Domain):
    xmin, xmax, ymin, ymax = u.rect
    seeds = []
    for fx in (0.25, 0.5, 0.75):
        for fy in (0.25, 0.5, 0.75):
            p = (xmin + fx * (xmax - xmin), ymin + fy * (ymax - ymin))
            if u.contains(*p):
                seeds.append(p)
    return seeds


def trace_curves(w: OneForm, u: Domain, seeds=None, step: float = 1e-2,
                 max_steps: int = 10_000, potential=None):
    """Trace the kernel field (N, -M) with unit-speed RK4 from each seed.

    The kernel convention makes omega vanish along the traces, so they are
    solution curves of M dx + N dy = 0. Traces stop on domain exit, the
    step cap, or a singular direction field (|field| < 1e-12).
    """
    if seeds is None:
        seeds = _grid_seeds(u)

    def field(p):
        vx = evaluate(w.n, p)
        vy = -evaluate(w.m, p)
        norm = math.hypot(vx, vy)
        if norm < 1e-12:
            return None
        return (vx / norm, vy / norm)

    def f_value(p):
        if potential is None:
            return None
        try:
            return potential.value(p)
        except Exception:
            return None

    traces = []
    for seed in seeds:
        seed = (float(seed[0]), float(seed[1]))
        if not u.contains(*seed):
            raise PreconditionError(f"seed {seed} outside the domain")
        evaluate(w.m, seed)  # surfaces evaluation errors at the seed
        evaluate(w.n, seed)
        points = [(0.0, seed[0], seed[1], f_value(seed))]
        termination = STEP_CAP
        p = seed
        t = 0.0
        for _ in range(max_steps):
            try:
                k1 = field(p)
                if k1 is None:
                    termination = SINGULAR
                    break
                k2 = field((p[0] + 0.5 * step * k1[0],
                            p[1] + 0.5 * step * k1[1]))
                k3 = field((p[0] + 0.5 * step * k2[0],
                            p[1] + 0.5 * step * k2[1])) if k2 else None
                k4 = field((p[0] + step * k3[0],
                            p[1] + step * k3[1])) if k3 else None
                if k2 is None or k3 is None or k4 is None:
                    termination = SINGULAR
                    break
            except EvaluationError:
                termination = SINGULAR
                break
            nxt = (p[0] + step / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                   p[1] + step / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]))
            if not u.contains(*nxt):
                termination = LEFT_DOMAIN
                break
            t += step
            p = nxt
            points.append((t, p[0], p[1], f_value(p)))
        traces.append(CurveTrace(points, step, termination))
    return traces


def traces_payload(traces, u: Domain, step: float) -> dict:
    """JSON-ready payload for a batch of traces (used by the service and
    the emitters)."""
    return {
        "domain": u.to_json_dict(),
        "step": step,
        "traces": [
            {
                "curve_id": i,
                "termination": tr.termination,
                "points": [[t, x, y, f] for (t, x, y, f) in tr.points],
            }
            for i, tr in enumerate(traces)
        ],
    }
