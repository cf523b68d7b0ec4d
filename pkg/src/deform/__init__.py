"""deform: symbolic-numeric exactness analysis of planar ODE 1-forms.

Classifies M dx + N dy as exact / closed-not-exact / not closed, computes
de Rham periods around domain punctures, searches for integrating factors,
and constructs global potentials F with F(x, y) = C as the solution.
"""

from .cohomology import (CLOSED_NOT_EXACT, Classification, EXACT, Loop,
                         NOT_CLOSED, PeriodVector, classify, default_loop,
                         line_integral, periods)
from .errors import (ComputationError, DeformError, DomainError,
                     EvaluationError, InputError, NonFiniteError, ParseError,
                     PathError, PreconditionError, QuadratureError,
                     SamplingError)
from .expr import (Expr, diff, equal_up_to_constant, evaluate, evaluate_many,
                   integrate_symbolic, parse, simplify, to_source)
from .forms import (ClosednessResult, OneForm, d_coefficient, is_closed,
                    one_form, pullback_integrand, scale)
from .geometry import Domain, domain_samples
from .mu import (MuCandidate, find_integrating_factor, try_mu_power,
                 try_mu_radial, try_mu_x, try_mu_y)
from .pipeline import (AnalysisOptions, AnalysisReport, CurveTrace, analyze,
                       narrative_tag, trace_curves, traces_payload)
from .potential import (NumericPotential, SymbolicPotential,
                        default_base_point, potential_numeric,
                        potential_symbolic, transport_change,
                        uniqueness_check, verify_potential)

__version__ = "0.1.0"

__all__ = [
    "AnalysisOptions", "AnalysisReport", "CLOSED_NOT_EXACT",
    "Classification", "ClosednessResult", "ComputationError", "CurveTrace",
    "DeformError", "Domain", "DomainError", "EXACT", "EvaluationError",
    "Expr", "InputError", "Loop", "MuCandidate", "NOT_CLOSED",
    "NonFiniteError", "NumericPotential", "OneForm", "ParseError",
    "PathError", "PeriodVector", "PreconditionError", "QuadratureError",
    "SamplingError", "SymbolicPotential", "analyze", "classify",
    "d_coefficient", "default_base_point", "default_loop", "diff",
    "domain_samples", "equal_up_to_constant", "evaluate", "evaluate_many",
    "find_integrating_factor", "integrate_symbolic", "is_closed",
    "line_integral", "narrative_tag", "one_form", "parse", "periods",
    "potential_numeric", "potential_symbolic", "pullback_integrand",
    "scale", "simplify", "to_source", "trace_curves", "traces_payload",
    "transport_change", "try_mu_power", "try_mu_radial", "try_mu_x",
    "try_mu_y", "uniqueness_check", "verify_potential",
]
