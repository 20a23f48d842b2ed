"""Cholesky factorizations with escalating diagonal jitter."""

from __future__ import annotations

import numpy as np
from scipy import linalg

from .exceptions import NumericsError

# Relative jitter ladder: nothing, then 1e-10 .. 1e-6 times the variance scale.
_JITTER_EXPONENTS = range(-10, -5)


def _jitter_ladder(scale: float) -> list[float]:
    return [0.0] + [scale * 10.0**e for e in _JITTER_EXPONENTS]


def _factor_with_jitter(A: np.ndarray, scale: float, factor):
    attempts = []
    n = A.shape[0]
    for jitter in _jitter_ladder(scale):
        attempts.append(jitter)
        regularized = A if jitter == 0.0 else A + jitter * np.eye(n)
        try:
            return factor(regularized), jitter
        except np.linalg.LinAlgError:
            continue
    min_eig = float(np.linalg.eigvalsh(A).min())
    raise NumericsError(
        f"matrix of size {n} is not positive definite even with jitter up to "
        f"{attempts[-1]:.3e} (smallest eigenvalue {min_eig:.6e})",
        min_eigenvalue=min_eig,
        jitter_attempts=attempts,
    )


def chol_factor(A: np.ndarray, scale: float):
    """Factor A for use with solve_chol, adding jitter if needed.

    Returns (factor, jitter_used). scale is the variance magnitude the jitter
    ladder is relative to (typically signal_std**2).
    """

    def factor(M):
        return linalg.cho_factor(M, lower=True, check_finite=False)

    return _factor_with_jitter(A, scale, factor)


def solve_chol(factor, B: np.ndarray) -> np.ndarray:
    """Solve A x = B given a factor from chol_factor."""
    return linalg.cho_solve(factor, B, check_finite=False)


def lower_cholesky(A: np.ndarray, scale: float):
    """Explicit lower-triangular Cholesky factor with the same jitter ladder.

    Returns (L, jitter_used); suitable for drawing correlated Gaussians.
    """
    return _factor_with_jitter(A, scale, np.linalg.cholesky)


def log_det_from_factor(factor) -> float:
    """log det A from a chol_factor result."""
    c, _ = factor
    return 2.0 * float(np.sum(np.log(np.diag(c))))
