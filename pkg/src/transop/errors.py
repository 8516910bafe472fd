"""Exception hierarchy shared by every module."""


class TransopError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(TransopError, ValueError):
    """An array does not match the number of points of the system."""


class ArgumentError(TransopError, ValueError):
    """An argument is outside the allowed range."""


class NormalizationError(TransopError, ValueError):
    """A measure or partition of unity fails its normalization check."""


class PositivityError(TransopError, ValueError):
    """A transfer operator has a negative entry."""


class SupportError(TransopError, ValueError):
    """A transfer operator entry violates ``entries[x, y] > 0 => alpha[y] == x``."""

    def __init__(self, message, x=None, y=None):
        super().__init__(message)
        self.x = x
        self.y = y


class DomainError(TransopError, ValueError):
    """A measure is outside the domain of an operation (usually: not invariant)."""


class ReducibleOperatorError(TransopError):
    """The twisted matrix is reducible or nilpotent, so its Gibbs gradient is not unique."""


class NoDirectionError(TransopError):
    """No divergence direction exists because the measure is invariant."""


class DegenerateSupportError(TransopError):
    """The argument of a logarithm vanishes at some point."""


class ConvergenceError(TransopError):
    """An iterative method hit its iteration cap.

    Attributes
    ----------
    best : object
        Best estimate available when the cap was hit.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
