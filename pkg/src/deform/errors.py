"""Exception hierarchy shared across the package.

Two broad families matter to callers: input problems (bad expression text,
invalid domain geometry) and computation problems (quadrature that will not
converge, paths that cannot avoid a puncture). The CLI maps the first family
to exit code 2 and the second to exit code 3.
"""


class DeformError(Exception):
    """Base class for all package errors."""


class InputError(DeformError):
    """User-supplied input is malformed (expression text, domain spec)."""


class ParseError(InputError):
    """Expression text does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DomainError(InputError):
    """Domain geometry violates an invariant (rect, punctures, radii)."""


class ComputationError(DeformError):
    """A numeric procedure failed; inputs were well-formed."""


class EvaluationError(ComputationError):
    """Expression evaluation hit a point outside its definition domain."""


class NonFiniteError(EvaluationError):
    """Evaluation overflowed or otherwise produced a non-finite value."""


class SamplingError(ComputationError):
    """Not enough valid sample points could be drawn from the domain."""


class QuadratureError(ComputationError):
    """Adaptive quadrature did not converge within the refinement cap."""


class PathError(ComputationError):
    """No admissible integration path exists to the requested target."""

    def __init__(self, message: str, blocking_puncture=None):
        super().__init__(message)
        self.blocking_puncture = blocking_puncture


class PreconditionError(ComputationError):
    """An operation was invoked outside its stated precondition."""
