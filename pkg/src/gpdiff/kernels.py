"""Anisotropic squared exponential covariance and its parameter set."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Hyperparameters", "kernel_value", "cov_matrix", "scaled_sqdist"]


@dataclass(frozen=True, eq=False)
class Hyperparameters:
    """Parameters of the squared exponential model with observation noise.

    Parameters
    ----------
    signal_std : float
        Marginal standard deviation of the latent function, > 0.
    lengthscales : array-like of shape (n_dims,)
        Per-dimension correlation lengthscales, all > 0.
    nugget_std : float
        Observation noise standard deviation, > 0.
    mean_offset : float, default=0.0
        Constant mean subtracted from responses before the GP algebra and
        added back to predictions.
    """

    signal_std: float
    lengthscales: np.ndarray
    nugget_std: float
    mean_offset: float = 0.0

    def __post_init__(self):
        ls = np.atleast_1d(np.asarray(self.lengthscales, dtype=float))
        if ls.ndim != 1 or ls.size == 0:
            raise ValueError("lengthscales must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(ls)) or np.any(ls <= 0.0):
            raise ValueError("lengthscales must be finite and positive")
        object.__setattr__(self, "lengthscales", ls)
        if not np.isfinite(self.signal_std) or self.signal_std <= 0.0:
            raise ValueError("signal_std must be finite and positive")
        if not np.isfinite(self.nugget_std) or self.nugget_std <= 0.0:
            raise ValueError("nugget_std must be finite and positive")
        if not np.isfinite(self.mean_offset):
            raise ValueError("mean_offset must be finite")

    @property
    def n_dims(self) -> int:
        return self.lengthscales.size

    def __eq__(self, other):
        if not isinstance(other, Hyperparameters):
            return NotImplemented
        return (
            self.signal_std == other.signal_std
            and self.nugget_std == other.nugget_std
            and self.mean_offset == other.mean_offset
            and np.array_equal(self.lengthscales, other.lengthscales)
        )


def scaled_sqdist(X: np.ndarray, Z: np.ndarray, lengthscales: np.ndarray) -> np.ndarray:
    """Sum over dimensions of ((x_l - z_l) / theta_l)^2 for all row pairs.

    Computed dimension by dimension from explicit differences, which keeps the
    square case exactly symmetric with an exactly zero diagonal.
    """
    X = np.asarray(X, dtype=float)
    Z = np.asarray(Z, dtype=float)
    if X.shape[1] != Z.shape[1]:
        raise ValueError("input dimension mismatch between point sets")
    if X.shape[1] != lengthscales.size:
        raise ValueError(
            f"input dimension {X.shape[1]} does not match "
            f"{lengthscales.size} lengthscales"
        )
    D = np.zeros((X.shape[0], Z.shape[0]))
    for l in range(X.shape[1]):
        D += ((X[:, l, None] - Z[None, :, l]) / lengthscales[l]) ** 2
    return D


def kernel_value(params: Hyperparameters, x, z) -> float:
    """Covariance between two points: signal_std^2 * exp(-sum_l ((x_l-z_l)/theta_l)^2)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    z = np.atleast_2d(np.asarray(z, dtype=float))
    return float(cov_matrix(params, x, z)[0, 0])


def cov_matrix(params: Hyperparameters, X, Z=None) -> np.ndarray:
    """Cross-covariance matrix between row sets X and Z (Z defaults to X)."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if Z is None:
        Z = X
    else:
        Z = np.asarray(Z, dtype=float)
        if Z.ndim == 1:
            Z = Z[:, None]
    D = scaled_sqdist(X, Z, params.lengthscales)
    return params.signal_std**2 * np.exp(-D)
