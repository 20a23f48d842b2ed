"""Estimator that tests whether two noisy samples share one smooth function."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .bands import (
    DifferenceBand,
    build_band,
    chi_square_radius,
    difference_covariance,
    kl_decompose,
    sample_confidence_set,
)
from .gp import GPRegressor
from .grid import check_grid, make_grid
from .kernels import Hyperparameters
from .mle import FitConfig, fit_hyperparameters
from .validation import check_box, check_dataset

__all__ = ["FunctionComparator"]


class FunctionComparator(BaseEstimator):
    """Two-sample test for a shared latent function, with a difference band.

    One covariance model is fitted to both datasets merged (unless params is
    given), each dataset gets its own GP posterior mean, and the difference of
    the two means is screened against a simultaneous confidence band built
    from the truncated eigenbasis of its null covariance on a test grid. The
    null hypothesis that both datasets share one function is rejected when
    the difference leaves the band anywhere on the grid.

    Parameters
    ----------
    alpha : float, default=0.05
        Simultaneous significance level of the band.
    grid : array-like of shape (n_points, d), optional
        Explicit test points. When omitted a lattice is generated.
    grid_size : int, default=500
        Number of generated lattice points (perfect d-th power for d >= 2).
    bounds : array-like of shape (d, 2), optional
        Box for the generated lattice. Defaults to the intersection of the
        per-dimension observed input ranges of the two datasets.
    band_samples : int, default=1000
        Confidence-set samples used for the band envelope.
    threshold_ratio : float, default=1e-6
        Eigenvalue truncation threshold relative to the largest eigenvalue.
    truncation : int, optional
        Forced number of retained eigenpairs, overriding the threshold rule.
    seed : int, default=0
        Seeds the band sampling and, when fit_config is omitted, the
        hyperparameter search.
    params : Hyperparameters, optional
        Fixed covariance model; skips the merged-data fit when given.
    fit_config : FitConfig, optional
        Settings for the hyperparameter search.

    Attributes
    ----------
    params_ : Hyperparameters used by both posteriors.
    model1_, model2_ : the per-dataset GPRegressor instances.
    grid_ : test points actually used, shape (n_points, d).
    diff_ : posterior mean of dataset 2 minus dataset 1 on the grid.
    lower_, upper_ : simultaneous band, lower = -upper.
    delta_ : max(0, |diff| - upper), the detected difference beyond the band.
    radius_ : chi-square confidence-ball radius.
    basis_ : retained eigenbasis of the difference covariance.
    acceptance_rate_ : empirical acceptance rate of the ball sampler.
    reject_ : True when the difference leaves the band anywhere.
    band_ : all of the above bundled as a DifferenceBand.
    """

    def __init__(
        self,
        alpha: float = 0.05,
        grid=None,
        grid_size: int = 500,
        bounds=None,
        band_samples: int = 1000,
        threshold_ratio: float = 1e-6,
        truncation: int | None = None,
        seed: int = 0,
        params: Hyperparameters | None = None,
        fit_config: FitConfig | None = None,
    ):
        self.alpha = alpha
        self.grid = grid
        self.grid_size = grid_size
        self.bounds = bounds
        self.band_samples = band_samples
        self.threshold_ratio = threshold_ratio
        self.truncation = truncation
        self.seed = seed
        self.params = params
        self.fit_config = fit_config

    def _resolve_grid(self, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
        d = X1.shape[1]
        if self.grid is not None:
            return check_grid(self.grid, bounds=self.bounds)
        if self.bounds is not None:
            box = check_box(self.bounds, n_dims=d)
        else:
            lo = np.maximum(X1.min(axis=0), X2.min(axis=0))
            hi = np.minimum(X1.max(axis=0), X2.max(axis=0))
            bad = np.flatnonzero(lo >= hi)
            if bad.size:
                raise ValueError(
                    f"observed input ranges do not overlap in dimension {bad[0]}"
                )
            box = np.column_stack([lo, hi])
        return make_grid(box, self.grid_size)

    def fit(self, X1, y1, X2, y2):
        """Run the comparison; returns self."""
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie strictly between 0 and 1, got {self.alpha}")
        X1, y1 = check_dataset(X1, y1, min_rows=2)
        X2, y2 = check_dataset(X2, y2, min_rows=2)
        if X1.shape[1] != X2.shape[1]:
            raise ValueError(
                f"input dimension mismatch: {X1.shape[1]} vs {X2.shape[1]} columns"
            )

        if self.params is not None:
            params = self.params
        else:
            config = self.fit_config if self.fit_config is not None else FitConfig(seed=self.seed)
            params = fit_hyperparameters(X1, y1, X2, y2, config)

        model1 = GPRegressor(params=params).fit(X1, y1)
        model2 = GPRegressor(params=params).fit(X2, y2)
        grid = self._resolve_grid(X1, X2)

        diff = model2.predict(grid) - model1.predict(grid)
        C = difference_covariance(model1, model2, grid)
        basis = kl_decompose(C, threshold_ratio=self.threshold_ratio, truncation=self.truncation)
        radius = chi_square_radius(basis.m, self.alpha)
        samples, acceptance_rate = sample_confidence_set(
            basis.m, radius, self.band_samples, self.seed
        )
        lower, upper = build_band(basis, samples)

        self.params_ = params
        self.model1_ = model1
        self.model2_ = model2
        self.grid_ = grid
        self.diff_ = diff
        self.lower_ = lower
        self.upper_ = upper
        self.radius_ = radius
        self.basis_ = basis
        self.acceptance_rate_ = acceptance_rate
        self.band_ = DifferenceBand.assemble(
            grid, diff, lower, upper, self.alpha, radius, self.band_samples, basis, acceptance_rate
        )
        self.delta_ = self.band_.delta
        self.reject_ = self.band_.reject
        self.n_features_in_ = X1.shape[1]
        return self

    def predict(self, X) -> np.ndarray:
        """Estimated difference (second minus first posterior mean) at X."""
        check_is_fitted(self, "band_")
        return self.model2_.predict(X) - self.model1_.predict(X)
