"""Covariance of the posterior-mean difference and simultaneous confidence bands.

Under the null hypothesis that two noisy datasets share one latent function,
the difference of the two posterior means is a zero-mean Gaussian process.
This module computes its covariance on a test grid, truncates it to the
dominant eigenpairs, samples coefficient vectors from the chi-square
confidence ball, and turns them into a simultaneous band for the difference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats
from sklearn.utils.validation import check_is_fitted

from .exceptions import DegenerateCovarianceError
from .kernels import cov_matrix
from .validation import check_inputs

__all__ = [
    "KLBasis",
    "DifferenceBand",
    "difference_covariance",
    "kl_decompose",
    "chi_square_radius",
    "sample_confidence_set",
    "build_band",
]


@dataclass(frozen=True)
class KLBasis:
    """Truncated eigenbasis of a difference covariance matrix.

    eigenvalues are strictly positive in descending order; eigenvectors holds
    the matching orthonormal columns, one per retained eigenvalue.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        vec = np.asarray(self.eigenvectors, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise ValueError("eigenvalues must be a non-empty 1-d array")
        if np.any(lam <= 0.0) or not np.all(np.isfinite(lam)):
            raise ValueError("eigenvalues must be finite and positive")
        if np.any(np.diff(lam) > 0.0):
            raise ValueError("eigenvalues must be in descending order")
        if vec.ndim != 2 or vec.shape[1] != lam.size:
            raise ValueError(
                f"eigenvector shape {vec.shape} does not match {lam.size} eigenvalues"
            )
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", vec)

    @property
    def m(self) -> int:
        """Number of retained eigenpairs."""
        return self.eigenvalues.size


@dataclass(frozen=True)
class DifferenceBand:
    """Pointwise difference estimate with a simultaneous confidence band.

    delta is the margin by which the difference exceeds the band
    (max(0, |diff| - upper)), and reject is True when any grid point
    falls strictly outside; points exactly on the boundary count as inside.
    """

    grid: np.ndarray
    diff: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    delta: np.ndarray
    alpha: float
    radius: float
    band_samples: int
    basis: KLBasis
    reject: bool
    sampler_acceptance_rate: float

    @classmethod
    def assemble(cls, grid, diff, lower, upper, alpha, radius, band_samples, basis, acceptance_rate):
        """Derive the exceedance margins and the decision from the band."""
        delta = np.maximum(0.0, np.abs(diff) - upper)
        return cls(
            grid=grid,
            diff=diff,
            lower=lower,
            upper=upper,
            delta=delta,
            alpha=float(alpha),
            radius=float(radius),
            band_samples=int(band_samples),
            basis=basis,
            reject=bool(np.any(delta > 0.0)),
            sampler_acceptance_rate=float(acceptance_rate),
        )

    @property
    def decision(self) -> str:
        return "reject" if self.reject else "accept"

    @property
    def rejected_percent(self) -> float:
        """Percent of grid points at which the difference leaves the band."""
        return 100.0 * float(np.mean(self.delta > 0.0))


def difference_covariance(model1, model2, grid) -> np.ndarray:
    """Covariance matrix of (posterior mean 2 - posterior mean 1) on the grid.

    Both models must be fitted with the same hyperparameters. The result is
    symmetric by construction; averaging with its transpose removes the
    rounding asymmetry left by the triangular solves, which grows large
    when a fitted nugget sits near zero (for example on duplicated data).
    """
    check_is_fitted(model1, "alpha_")
    check_is_fitted(model2, "alpha_")
    params = model1.params_
    if params != model2.params_:
        raise ValueError("models must share one fitted set of hyperparameters")
    grid = check_inputs(grid, n_dims=params.n_dims)

    R1 = cov_matrix(params, model1.X_train_, grid)
    R2 = cov_matrix(params, model2.X_train_, grid)
    S1 = model1.solve_gram(R1)
    S2 = model2.solve_gram(R2)
    K21 = cov_matrix(params, model2.X_train_, model1.X_train_)
    Q = S2.T @ K21 @ S1
    C = R2.T @ S2 + R1.T @ S1 - Q - Q.T
    return (C + C.T) / 2.0


def kl_decompose(C: np.ndarray, threshold_ratio: float = 1e-6, truncation: int | None = None) -> KLBasis:
    """Truncated eigendecomposition of a symmetric covariance matrix.

    Eigenvalues below threshold_ratio times the largest one are dropped, as
    are nonpositive ones (numerical noise). When truncation is given it
    overrides the threshold rule and keeps the leading min(truncation,
    positive count) eigenpairs.
    """
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValueError("covariance must be a square matrix")
    scale = max(1.0, float(np.max(np.abs(C)))) if C.size else 1.0
    if np.max(np.abs(C - C.T)) > 1e-8 * scale:
        raise ValueError("covariance must be symmetric within 1e-8")
    if threshold_ratio <= 0.0 or threshold_ratio >= 1.0:
        raise ValueError("threshold_ratio must lie in (0, 1)")
    if truncation is not None and truncation < 1:
        raise ValueError("truncation must be a positive integer")

    sym = 0.5 * (C + C.T)
    eigenvalues, eigenvectors = linalg.eigh(sym)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order]
    eigenvectors = eigenvectors[:, order]

    if eigenvalues.size == 0 or eigenvalues[0] <= 0.0:
        raise DegenerateCovarianceError(
            "covariance has no positive eigenvalue to retain",
            min_eigenvalue=float(eigenvalues.min()) if eigenvalues.size else None,
        )
    # rank cutoff: eigenvalues at rounding-noise level never count as positive
    noise_floor = eigenvalues.size * np.finfo(float).eps * eigenvalues[0]
    n_positive = int(np.sum(eigenvalues > noise_floor))
    if truncation is not None:
        keep = min(truncation, n_positive)
    else:
        keep = int(np.sum(eigenvalues >= threshold_ratio * eigenvalues[0]))
        keep = min(keep, n_positive)
    return KLBasis(eigenvalues=eigenvalues[:keep], eigenvectors=eigenvectors[:, :keep])


def chi_square_radius(m: int, alpha: float) -> float:
    """Radius of the (1 - alpha) chi-square ball in m dimensions."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie strictly between 0 and 1, got {alpha}")
    if m < 1:
        raise ValueError(f"dimension must be a positive integer, got {m}")
    return float(np.sqrt(stats.chi2.ppf(1.0 - alpha, df=m)))


def sample_confidence_set(m: int, radius: float, count: int, seed) -> tuple[np.ndarray, float]:
    """Draw exactly count iid standard normal m-vectors with norm <= radius.

    Rejection sampling from a seeded generator; the boundary is inclusive.
    Returns (samples, empirical acceptance rate over all candidates drawn).
    """
    if m < 1:
        raise ValueError(f"dimension must be a positive integer, got {m}")
    if not radius > 0.0:  # also catches NaN
        raise ValueError(f"radius must be positive, got {radius}")
    if count < 1:
        raise ValueError(f"count must be a positive integer, got {count}")

    rng = np.random.default_rng(seed)
    batch = max(int(count), 1024)
    accepted: list[np.ndarray] = []
    n_accepted = 0
    n_drawn = 0
    while n_accepted < count:
        candidates = rng.standard_normal((batch, m))
        keep = np.linalg.norm(candidates, axis=1) <= radius
        accepted.append(candidates[keep])
        n_accepted += int(keep.sum())
        n_drawn += batch
        if n_drawn > max(10_000_000, 1000 * count) and n_accepted == 0:
            raise RuntimeError(
                f"acceptance rate below {count / n_drawn:.2e}; radius {radius} is "
                f"too small for dimension {m}"
            )
    samples = np.concatenate(accepted, axis=0)[:count]
    return samples, n_accepted / n_drawn


def build_band(basis: KLBasis, samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Simultaneous band: envelope of |U sqrt(lambda) z| over the sample z's.

    Returns (lower, upper) with lower = -upper.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise ValueError("need at least one sample row")
    if samples.shape[1] != basis.m:
        raise ValueError(
            f"sample components {samples.shape[1]} do not match basis size {basis.m}"
        )
    scale = basis.eigenvectors * np.sqrt(basis.eigenvalues)[None, :]
    paths = samples @ scale.T
    upper = np.max(np.abs(paths), axis=0)
    return -upper, upper
