"""Gaussian process posterior-mean regression with a fixed covariance model."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._linalg import chol_factor, solve_chol
from .kernels import Hyperparameters, cov_matrix
from .validation import check_dataset, check_inputs

__all__ = ["GPRegressor"]


class GPRegressor(RegressorMixin, BaseEstimator):
    """Posterior mean of a GP with squared exponential covariance and a nugget.

    The regressor conditions a zero-mean GP (after subtracting the constant
    ``mean_offset``) on noisy observations and predicts the posterior mean at
    query points. The covariance hyperparameters are either supplied or fitted
    to the training data by marginal likelihood maximization.

    Parameters
    ----------
    params : Hyperparameters, optional
        Covariance model to condition with. When omitted, hyperparameters are
        fitted to the training data at ``fit`` time.
    fit_config : FitConfig, optional
        Optimizer settings used only when ``params`` is None.

    Attributes
    ----------
    params_ : Hyperparameters
        Parameters actually used (supplied or fitted).
    alpha_ : ndarray of shape (n_train,)
        Solution of ``(K + nugget_std^2 I) alpha = y - mean_offset``.
    jitter_ : float
        Diagonal jitter added to make the factorization succeed (usually 0).
    X_train_, y_train_ : ndarray
        Validated copies of the training data.

    Examples
    --------
    >>> p = Hyperparameters(signal_std=1.0, lengthscales=[1.0], nugget_std=1.0)
    >>> GPRegressor(params=p).fit([[0.0]], [2.0]).predict([[0.0]])
    array([1.])
    """

    def __init__(self, params: Hyperparameters | None = None, fit_config=None):
        self.params = params
        self.fit_config = fit_config

    def fit(self, X, y):
        """Condition on training data; returns self."""
        X, y = check_dataset(X, y, min_rows=1)
        if self.params is None:
            from .mle import maximize_likelihood

            params = maximize_likelihood(X, y, self.fit_config).params
        else:
            params = self.params
        if params.n_dims != X.shape[1]:
            raise ValueError(
                f"params have {params.n_dims} lengthscales but inputs have "
                f"{X.shape[1]} columns"
            )
        resid = y - params.mean_offset
        A = cov_matrix(params, X)
        A[np.diag_indices_from(A)] += params.nugget_std**2
        factor, jitter = chol_factor(A, params.signal_std**2)
        self.params_ = params
        self.X_train_ = X
        self.y_train_ = y
        self.alpha_ = solve_chol(factor, resid)
        self.jitter_ = jitter
        self.n_features_in_ = X.shape[1]
        self._factor = factor
        return self

    def predict(self, X) -> np.ndarray:
        """Posterior mean at the query rows."""
        check_is_fitted(self, "alpha_")
        X = check_inputs(X, n_dims=self.n_features_in_)
        return self.params_.mean_offset + cov_matrix(self.params_, X, self.X_train_) @ self.alpha_

    def solve_gram(self, B: np.ndarray) -> np.ndarray:
        """Solve ``(K + nugget_std^2 I) x = B`` with the stored factorization."""
        check_is_fitted(self, "alpha_")
        return solve_chol(self._factor, B)
