"""Integrating-factor search: the heuristic ladder and its soundness gates.

Candidate families, tried in a fixed order with first-hit-wins:

  x_only     mu = exp(int h dx),  h = (dM/dy - dN/dx)/N   if h is y-free
  y_only     mu = exp(int g dy),  g = (dN/dx - dM/dy)/M   if g is x-free
  power_law  mu = x^a * y^b       exponents fitted by least squares
  radial     mu = (x^2+y^2)^k     exponent fitted by least squares

Every candidate passes three gates before it is returned: mu must be
defined on the whole working domain (a factor singular along a line inside
the rectangle is not a function on it), mu must stay away from zero at all
sample points, and the rescaled form must verify as closed by sampling.
The definedness gate is structural where possible (bare variables, sums of
squares) so decisions do not hinge on a sample landing exactly on a zero
set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .expr import (Add, Call, Const, Div, Expr, Mul, Neg, Pow, Sub, Var,
                   diff, evaluate_many, integrate_symbolic, simplify,
                   to_source)
from .forms import OneForm, is_closed, scale
from .geometry import Domain, domain_samples, paired_samples

MU_VERIFY_TOL = 1e-8
MU_NONVANISHING_TOL = 1e-8
_FIT_TOL = 1e-8
_INT_SNAP = 1e-6

X_ONLY = "x_only"
Y_ONLY = "y_only"
POWER_LAW = "power_law"
RADIAL = "radial"


@dataclass(frozen=True)
class MuCandidate:
    mu: Expr
    family: str
    verified: bool
    nonvanishing_checked: bool
    residual: float

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "mu": to_source(self.mu),
            "verified": self.verified,
            "residual": self.residual,
        }


def _note(notes, message):
    if notes is not None:
        notes.append(message)


# --- definedness gate -------------------------------------------------

def _nonzero_atoms(e: Expr, out: list):
    """Reduce a nonzero-requirement to atomic subexpressions."""
    if isinstance(e, Pow) and isinstance(e.exponent, Const):
        _nonzero_atoms(e.base, out)
    elif isinstance(e, (Mul, Div)):
        _nonzero_atoms(e.left, out)
        _nonzero_atoms(e.right, out)
    elif isinstance(e, Neg):
        _nonzero_atoms(e.arg, out)
    elif isinstance(e, Call) and e.fn == "exp":
        pass  # exp never vanishes
    elif isinstance(e, Const):
        if e.value == 0.0:
            out.append(e)
    else:
        out.append(e)


def _collect_constraints(e: Expr, out: list):
    """(kind, subexpression) pairs that must hold on the whole domain."""
    if isinstance(e, Div):
        atoms = []
        _nonzero_atoms(e.right, atoms)
        out.extend(("nonzero", a) for a in atoms)
        _collect_constraints(e.left, out)
        _collect_constraints(e.right, out)
    elif isinstance(e, Pow):
        if isinstance(e.exponent, Const):
            k = e.exponent.value
            if k < 0:
                atoms = []
                _nonzero_atoms(e.base, atoms)
                out.extend(("nonzero", a) for a in atoms)
            if k != int(k):
                out.append(("positive", e.base))
        else:
            out.append(("positive", e.base))
            _collect_constraints(e.exponent, out)
        _collect_constraints(e.base, out)
    elif isinstance(e, Call):
        if e.fn in ("log", "sqrt"):
            out.append(("positive", e.arg))
        _collect_constraints(e.arg, out)
    elif isinstance(e, (Add, Sub, Mul)):
        _collect_constraints(e.left, out)
        _collect_constraints(e.right, out)
    elif isinstance(e, Neg):
        _collect_constraints(e.arg, out)


def _positive_combination_of_squares(e: Expr) -> bool:
    """True for c1*x^2 + c2*y^2 with c1, c2 > 0 (zero set is the origin)."""
    from .expr.simplify import sum_terms, _FoldError

    try:
        constant, terms = sum_terms(e)
    except _FoldError:
        return False
    if constant != 0.0 or len(terms) != 2:
        return False
    want = {Pow(Var("x"), Const(2.0)), Pow(Var("y"), Const(2.0))}
    got = {k for _, k in terms}
    return got == want and all(c > 0 for c, _ in terms)


def _origin_shielded(u: Domain) -> bool:
    """The origin is outside the closed rectangle or inside the exclusion
    disk of some puncture."""
    xmin, xmax, ymin, ymax = u.rect
    if not (xmin <= 0.0 <= xmax and ymin <= 0.0 <= ymax):
        return True
    r2 = u.exclusion_radius ** 2
    return any(px * px + py * py <= r2 for px, py in u.punctures)


def _constraint_violated(kind: str, sub: Expr, u: Domain,
                         xs, ys) -> Optional[str]:
    xmin, xmax, ymin, ymax = u.rect
    if isinstance(sub, Var):
        lo, hi = (xmin, xmax) if sub.name == "x" else (ymin, ymax)
        if kind == "nonzero":
            if lo < 0.0 < hi:
                return f"{sub.name}=0 crosses the domain"
            return None
        if lo < 0.0:
            return f"{sub.name}<=0 occurs in the domain"
        return None
    if _positive_combination_of_squares(sub):
        if _origin_shielded(u):
            return None
        return "singular at the origin, which lies inside the domain"
    values, valid = evaluate_many(sub, xs, ys)
    if not valid.all():
        return f"{to_source(sub)} undefined inside the domain"
    if kind == "positive":
        if (values <= 0.0).any():
            return f"{to_source(sub)} not positive on the domain"
        return None
    if (values <= 0.0).any() and (values >= 0.0).any():
        return f"{to_source(sub)} has a zero crossing inside the domain"
    return None


def definedness_obstruction(mu: Expr, u: Domain, xs, ys) -> Optional[str]:
    """Reason mu fails to be a function on all of u, or None."""
    constraints = []
    _collect_constraints(mu, constraints)
    seen = set()
    for kind, sub in constraints:
        if (kind, sub) in seen:
            continue
        seen.add((kind, sub))
        reason = _constraint_violated(kind, sub, u, xs, ys)
        if reason is not None:
            return reason
    return None


# --- candidate admission ----------------------------------------------

def _admit(w: OneForm, u: Domain, mu: Expr, family: str,
           notes=None) -> Optional[MuCandidate]:
    mu = simplify(mu)
    xs, ys = domain_samples(u, 256)
    reason = definedness_obstruction(mu, u, xs, ys)
    if reason is not None:
        _note(notes, f"{family}: rejected, {reason}")
        return None
    values, valid = evaluate_many(mu, xs, ys)
    if not valid.all():
        _note(notes, f"{family}: rejected, mu undefined at a sample point")
        return None
    if (np.abs(values) <= MU_NONVANISHING_TOL).any():
        _note(notes, f"{family}: rejected, |mu| <= {MU_NONVANISHING_TOL} "
                     "at a sample point")
        return None
    closed = is_closed(scale(w, mu), u, 256, MU_VERIFY_TOL)
    if not closed.closed:
        _note(notes, f"{family}: rejected, d(mu*omega) residual "
                     f"{closed.residual:.3e}")
        return None
    return MuCandidate(mu, family, True, True, closed.residual)


def _single_variable_candidate(w: OneForm, u: Domain, family: str,
                               notes=None) -> Optional[MuCandidate]:
    """Common body of try_mu_x / try_mu_y."""
    if family == X_ONLY:
        divisor, ratio_num = w.n, Sub(diff(w.m, "y"), diff(w.n, "x"))
        integrate_in, independent_of = "x", "y"
    else:
        divisor, ratio_num = w.m, Sub(diff(w.n, "x"), diff(w.m, "y"))
        integrate_in, independent_of = "y", "x"

    xs, ys = domain_samples(u, 64)
    dv, dok = evaluate_many(divisor, xs, ys)
    usable = dok & (np.abs(dv) > 1e-12)
    if usable.sum() < 0.5 * len(xs):
        _note(notes, f"{family}: divisor vanishes on too many samples")
        return None

    h = simplify(Div(ratio_num, divisor))
    xs1, ys1, xs2, ys2 = paired_samples(u, 64, vary=independent_of)
    h1, ok1 = evaluate_many(h, xs1, ys1)
    h2, ok2 = evaluate_many(h, xs2, ys2)
    mask = ok1 & ok2
    if mask.sum() < 8:
        _note(notes, f"{family}: too few valid sample pairs")
        return None
    scale_h = 1.0 + max(np.abs(h1[mask]).max(), np.abs(h2[mask]).max())
    if np.abs(h1[mask] - h2[mask]).max() > 1e-8 * scale_h:
        _note(notes, f"{family}: ratio depends on {independent_of}")
        return None

    antiderivative = integrate_symbolic(h, integrate_in)
    if antiderivative is None:
        _note(notes, f"{family}: no antiderivative rule for "
                     f"{to_source(h)}")
        return None
    return _admit(w, u, Call("exp", antiderivative), family, notes)


def try_mu_x(w: OneForm, u: Domain, notes=None) -> Optional[MuCandidate]:
    """mu depending on x alone: mu = exp(int (M_y - N_x)/N dx)."""
    return _single_variable_candidate(w, u, X_ONLY, notes)


def try_mu_y(w: OneForm, u: Domain, notes=None) -> Optional[MuCandidate]:
    """mu depending on y alone: mu = exp(int (N_x - M_y)/M dy)."""
    return _single_variable_candidate(w, u, Y_ONLY, notes)


def _fit_samples(w: OneForm, u: Domain, count: int = 64):
    """Axis-avoiding admissible samples for the ansatz fits."""
    xs, ys = domain_samples(u, 4 * count)
    mx = 0.02 * u.width
    my = 0.02 * u.height
    keep = (np.abs(xs) > mx) & (np.abs(ys) > my)
    return xs[keep][:count], ys[keep][:count]


def _snap_int(v: float) -> float:
    r = round(v)
    return float(r) if abs(v - r) < _INT_SNAP else float(v)


def _power_mu(a: float, b: float) -> Expr:
    factors = []
    if a != 0.0:
        factors.append(Pow(Var("x"), Const(a)))
    if b != 0.0:
        factors.append(Pow(Var("y"), Const(b)))
    if not factors:
        return Const(1.0)
    e = factors[0]
    for f in factors[1:]:
        e = Mul(e, f)
    return simplify(e)


def try_mu_power(w: OneForm, u: Domain, notes=None) -> Optional[MuCandidate]:
    """mu = x^a * y^b; the closedness condition a*(N/x) - b*(M/y) =
    M_y - N_x is linear in (a, b), so fit by least squares over samples."""
    xs, ys = _fit_samples(w, u)
    if len(xs) < 8:
        _note(notes, "power_law: too few axis-avoiding samples")
        return None
    mv, mok = evaluate_many(w.m, xs, ys)
    nv, nok = evaluate_many(w.n, xs, ys)
    rhs_expr = simplify(Sub(diff(w.m, "y"), diff(w.n, "x")))
    rv, rok = evaluate_many(rhs_expr, xs, ys)
    valid = mok & nok & rok
    if valid.sum() < 8:
        _note(notes, "power_law: too few valid samples")
        return None
    col_a = nv[valid] / xs[valid]
    col_b = -(mv[valid] / ys[valid])
    b_vec = rv[valid]
    finite = np.isfinite(col_a) & np.isfinite(col_b) & np.isfinite(b_vec)
    col_a, col_b, b_vec = col_a[finite], col_b[finite], b_vec[finite]
    if len(b_vec) < 8:
        _note(notes, "power_law: too few finite samples")
        return None
    A = np.column_stack([col_a, col_b])
    sol, _, rank, _ = np.linalg.lstsq(A, b_vec, rcond=None)
    res_tol = _FIT_TOL * (1.0 + np.abs(b_vec).max())

    def admissible(a, b):
        if np.abs(A @ np.array([a, b]) - b_vec).max() > res_tol:
            return None
        return _admit(w, u, _power_mu(a, b), POWER_LAW, notes)

    if rank == 2:
        a, b = _snap_int(float(sol[0])), _snap_int(float(sol[1]))
        cand = admissible(a, b)
        if cand is None:
            _note(notes, "power_law: fitted exponents rejected")
        return cand
    if rank == 1:
        # consistent rank-deficient system: a one-parameter family solves
        # it; prefer integer members (textbook factors), smallest first
        if np.abs(A @ sol - b_vec).max() > res_tol:
            _note(notes, "power_law: rank-deficient and inconsistent")
            return None
        _, _, vt = np.linalg.svd(A)
        null = vt[-1]
        candidates = set()
        for target in range(-6, 7):
            for idx in (0, 1):
                if abs(null[idx]) < 1e-9:
                    continue
                t = (target - sol[idx]) / null[idx]
                other = sol[1 - idx] + t * null[1 - idx]
                if abs(other - round(other)) < _INT_SNAP:
                    pair = [0.0, 0.0]
                    pair[idx] = float(target)
                    pair[1 - idx] = float(round(other))
                    candidates.add((pair[0], pair[1]))
        for a, b in sorted(candidates,
                           key=lambda ab: (abs(ab[0]) + abs(ab[1]), ab)):
            cand = admissible(a, b)
            if cand is not None:
                return cand
        _note(notes, "power_law: no admissible member of the solution "
                     "family")
        return None
    _note(notes, "power_law: rank-deficient sample system")
    return None


def try_mu_radial(w: OneForm, u: Domain, notes=None) -> Optional[MuCandidate]:
    """mu = (x^2+y^2)^k; the closedness condition is linear in k."""
    xs, ys = _fit_samples(w, u)
    if len(xs) < 8:
        _note(notes, "radial: too few samples")
        return None
    mv, mok = evaluate_many(w.m, xs, ys)
    nv, nok = evaluate_many(w.n, xs, ys)
    rhs_expr = simplify(Sub(diff(w.m, "y"), diff(w.n, "x")))
    rv, rok = evaluate_many(rhs_expr, xs, ys)
    valid = mok & nok & rok
    r2 = xs ** 2 + ys ** 2
    col = np.where(r2 > 0, (2.0 * xs * nv - 2.0 * ys * mv) / r2, np.nan)
    finite = valid & np.isfinite(col)
    col, b_vec = col[finite], rv[finite]
    if len(b_vec) < 8:
        _note(notes, "radial: too few valid samples")
        return None
    denom = float(col @ col)
    if denom < 1e-14:
        _note(notes, "radial: rank-deficient sample system")
        return None
    k = _snap_int(float(col @ b_vec) / denom)
    if np.abs(col * k - b_vec).max() > _FIT_TOL * (1.0 + np.abs(b_vec).max()):
        _note(notes, "radial: no consistent exponent")
        return None
    base = Add(Pow(Var("x"), Const(2.0)), Pow(Var("y"), Const(2.0)))
    cand = _admit(w, u, simplify(Pow(base, Const(k))), RADIAL, notes)
    if cand is None:
        _note(notes, "radial: fitted exponent rejected")
    return cand


_LADDER = ((X_ONLY, try_mu_x), (Y_ONLY, try_mu_y),
           (POWER_LAW, try_mu_power), (RADIAL, try_mu_radial))


def find_integrating_factor(w: OneForm, u: Domain, notes=None):
    """First verified, nonvanishing candidate in ladder order, together
    with the rescaled form. None means the heuristics are exhausted, not
    that no integrating factor exists."""
    for _, rung in _LADDER:
        candidate = rung(w, u, notes)
        if candidate is not None:
            return candidate, scale(w, candidate.mu)
    return None
