"""Typed errors raised throughout p3fox.

Two families exist so callers (and the CLI exit codes) can tell bad input
from a numerical breakdown:

    DomainError:     the request itself is outside the supported domain.
    NumericalError:  a valid request failed while being computed.
"""


class P3Error(Exception):
    """Base class of every p3fox error."""


class UsageError(P3Error):
    """Command line misuse."""


# ===== DOMAIN ERRORS


class DomainError(P3Error, ValueError):
    """Input outside the supported domain."""


class PoleError(DomainError):
    """Evaluation at a pole.

    Args:
        message: Human readable description.
        index: Offending factor or determinant index, if any.

    """

    def __init__(self, message: str, index: int | None = None):
        """Initialize pole error."""
        super().__init__(message)
        self.index = index


class IntegerOrderError(DomainError):
    """Bessel Y requested at integer order."""


class BoundaryAlphaError(DomainError):
    """Re(alpha) lies on a window edge of the asymptotic classification."""


class RangeError(DomainError):
    """Integer argument outside its admissible range."""


class ShapeError(DomainError):
    """Matrix shape does not fit the operation."""


class DegenerateCoefficientError(DomainError):
    """Both cylinder coefficients vanish."""


class SingularError(DomainError):
    """Singular point of the Painleve III equation (u=0 or x=0)."""


class ZeroError(DomainError):
    """Chart inversion of a zero value."""


class ZeroLeadError(DomainError):
    """Series without an invertible leading term."""


# ===== NUMERICAL ERRORS


class NumericalError(P3Error, ArithmeticError):
    """Valid request that failed numerically."""


class ConvergenceError(NumericalError):
    """Series or iteration did not reach its tolerance."""


class DegenerateError(NumericalError):
    """Vanishing denominator along a Backlund or recurrence orbit.

    Args:
        message: Human readable description.
        iteration: Orbit index where the denominator vanished.

    """

    def __init__(self, message: str, iteration: int | None = None):
        """Initialize degenerate error."""
        super().__init__(message)
        self.iteration = iteration


class ResonanceError(NumericalError):
    """Colliding lattice exponents or vanishing solvability factor."""


class ParityError(NumericalError):
    """Series terms from different parity classes were combined."""


class StepError(NumericalError):
    """Non finite stage value inside a Runge-Kutta step."""


class StallError(NumericalError):
    """Adaptive step size underflowed."""


class SeedError(NumericalError):
    """Seeding trajectory for a grid failed."""


class DeterminantOverflowError(NumericalError, OverflowError):
    """Determinant left the double precision range."""
