"""Exception hierarchy shared by all cyclecap modules."""


class CycleCapError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CycleCapError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OutOfRegime(DomainError):
    """The constraint is too weak for the saddle-point regime (n / (w*alpha) <= 1)."""


class DegenerateError(DomainError):
    """A statistic cannot be standardized (zero or negative variance)."""


class ResourceLimitError(CycleCapError):
    """The requested exact computation exceeds a configured hard cap."""


class NoConvergence(CycleCapError, ArithmeticError):
    """An iterative solver failed to reach its tolerance."""


class DiagnosticError(CycleCapError, ArithmeticError):
    """Two independent evaluation routes of the same quantity disagree."""
