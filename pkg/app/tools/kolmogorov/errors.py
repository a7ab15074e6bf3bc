"""Exception hierarchy for the monotone Kolmogorov toolkit."""


class KolmogorovError(Exception):
    """Base class for every error raised by the toolkit."""


class ArgumentError(KolmogorovError, ValueError):
    """An argument violates a documented invariant."""


class DomainError(ArgumentError):
    """Evaluation requested outside the half-line t <= 0."""


class PreconditionError(ArgumentError):
    """An operation was called on an input it is not defined for."""


class InfeasibleTripleError(KolmogorovError):
    """Three targets violate the sharp three-norm inequality."""

    def __init__(self, message: str, slack: float):
        super().__init__(message)
        self.slack = slack


class InfeasibleProblemError(KolmogorovError):
    """A four-number problem has no witness."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NoConvergenceError(KolmogorovError, RuntimeError):
    """A bracket could not be established or a bisection did not settle."""


class InternalCheckError(KolmogorovError, RuntimeError):
    """A constructed object failed its own post-condition."""
