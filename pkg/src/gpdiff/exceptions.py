"""Errors raised by the numerical routines."""

__all__ = ["NumericsError", "DegenerateCovarianceError", "FitFailureError"]


class NumericsError(RuntimeError):
    """A linear-algebra step failed after all recovery attempts.

    Attributes
    ----------
    min_eigenvalue : float or None
        Smallest eigenvalue of the offending matrix, when it was computed.
    jitter_attempts : tuple of float
        Diagonal jitter values that were tried before giving up.
    """

    def __init__(self, message, min_eigenvalue=None, jitter_attempts=()):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue
        self.jitter_attempts = tuple(jitter_attempts)


class DegenerateCovarianceError(NumericsError):
    """A covariance matrix has no positive eigenvalue mass to decompose."""


class FitFailureError(RuntimeError):
    """Every hyperparameter optimization start failed to produce a finite objective."""
