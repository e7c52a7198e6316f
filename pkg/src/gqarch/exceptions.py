"""Exception and warning classes raised across the package."""


class GqarchError(Exception):
    """Base class for all domain errors raised by this package."""


class DomainError(GqarchError, ValueError):
    """A parameter lies outside the domain where an operation is defined."""


class ConditionError(GqarchError, ValueError):
    """A stationarity or moment condition required by an operation fails.

    Parameters
    ----------
    message : str
        Human readable description.
    condition : str, optional
        Name of the failing condition, as used in ``ConditionReport.name``.
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class DivergenceError(GqarchError, FloatingPointError):
    """Simulated conditional variance overflowed."""

    def __init__(self, step):
        super().__init__(f"conditional variance exceeded 1e300 at step {step}")
        self.step = step


class ConvergenceError(GqarchError, RuntimeError):
    """An iterative solver did not reach its tolerance."""


class DegenerateSeriesError(GqarchError, ValueError):
    """Input series has zero variance or is otherwise unusable."""


class DegenerateSpecWarning(UserWarning):
    """Model specification is on a degenerate boundary (e.g. ``a == 0``)."""


class NonStationaryWarning(UserWarning):
    """Simulation requested outside the stationarity region."""
