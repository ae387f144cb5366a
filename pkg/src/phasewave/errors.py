"""Exception hierarchy shared by all phasewave modules.

Two top branches matter to callers (and to the CLI exit-code contract):
``ValidationError`` for rejected inputs and ``NumericsError`` for
computations that started but could not be completed reliably.
"""


class PhasewaveError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PhasewaveError, ValueError):
    """Input violates a documented precondition."""


class GridMismatchError(ValidationError):
    """Two phase-space fields were combined on different grids."""


class NumericsError(PhasewaveError, RuntimeError):
    """A numerical procedure failed to reach its accuracy target."""


class TruncationError(NumericsError):
    """Fock-space truncation leaked more probability than allowed.

    ``detail`` carries the offending quantity (tail mass, worst column
    index, or last retained term) for diagnostics.
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class QuadratureError(NumericsError):
    """A quadrature did not converge within its refinement budget."""

    def __init__(self, message, worst_node=None):
        super().__init__(message)
        self.worst_node = worst_node


class ContainmentError(ValidationError):
    """A sampled field does not contain the state it is asked about."""
