"""Marginal likelihood evaluation and gradient-free hyperparameter fitting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ._linalg import chol_factor, log_det_from_factor, solve_chol
from .exceptions import FitFailureError, NumericsError
from .kernels import Hyperparameters
from .validation import check_dataset

__all__ = ["FitConfig", "MLEFit", "neg_log_likelihood", "maximize_likelihood", "fit_hyperparameters"]

_LOG_2PI = float(np.log(2.0 * np.pi))
# Floor applied to degenerate data scales (constant responses or inputs) so the
# derived bounds stay a valid box.
_SCALE_FLOOR = 1e-8


@dataclass
class FitConfig:
    """Settings for the multi-start simplex search over log hyperparameters.

    bounds, when given, is a (n_dims + 2, 2) array of natural-unit
    (lower, upper) pairs ordered as [signal_std, lengthscales..., nugget_std];
    the default box is derived from the data scales.
    """

    restarts: int = 5
    max_iters: int = 200
    bounds: np.ndarray | None = None
    seed: int = 0
    xatol: float = 1e-2
    fatol: float = 1e-2


@dataclass
class MLEFit:
    """Result of maximize_likelihood.

    trace holds the best objective value seen at each improving evaluation of
    the winning restart, so it is non-increasing by construction.
    """

    params: Hyperparameters
    nll: float
    trace: np.ndarray
    restart_index: int
    at_bounds: np.ndarray
    bounds: np.ndarray
    n_failed_restarts: int = 0


def _pairwise_sq_diffs(X: np.ndarray) -> np.ndarray:
    n, d = X.shape
    sq = np.empty((d, n, n))
    for l in range(d):
        diff = X[:, l, None] - X[None, :, l]
        sq[l] = diff * diff
    return sq


def _nll_core(sq: np.ndarray, resid: np.ndarray, vector: np.ndarray) -> float:
    """NLL at natural-unit vector [signal_std, lengthscales..., nugget_std]."""
    signal_std, lengthscales, nugget_std = vector[0], vector[1:-1], vector[-1]
    D = np.tensordot(1.0 / lengthscales**2, sq, axes=1)
    A = signal_std**2 * np.exp(-D)
    A[np.diag_indices_from(A)] += nugget_std**2
    factor, _ = chol_factor(A, signal_std**2)
    alpha = solve_chol(factor, resid)
    quad = float(resid @ alpha)
    return 0.5 * quad + 0.5 * log_det_from_factor(factor) + 0.5 * resid.size * _LOG_2PI


def neg_log_likelihood(params: Hyperparameters, X, y) -> float:
    """Exact Gaussian negative log likelihood of (X, y) under the model.

    Responses are centered by params.mean_offset; the covariance is the
    squared exponential plus nugget_std^2 on the diagonal.
    """
    X, y = check_dataset(X, y, min_rows=1)
    if params.n_dims != X.shape[1]:
        raise ValueError(
            f"params have {params.n_dims} lengthscales but inputs have "
            f"{X.shape[1]} columns"
        )
    vector = np.concatenate([[params.signal_std], params.lengthscales, [params.nugget_std]])
    return _nll_core(_pairwise_sq_diffs(X), y - params.mean_offset, vector)


def _default_box(X: np.ndarray, resid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale-aware starting point and bounds, ordered [signal, lengths..., nugget]."""
    y_std = max(float(np.std(resid)), _SCALE_FLOOR)
    ranges = X.max(axis=0) - X.min(axis=0)
    ranges = np.maximum(ranges, _SCALE_FLOOR)
    init = np.concatenate([[y_std], ranges / 10.0, [y_std / 10.0]])
    lower = np.concatenate([[1e-3 * y_std], 1e-3 * ranges, [1e-6 * y_std]])
    upper = np.concatenate([[1e3 * y_std], 1e3 * ranges, [1.0 * y_std]])
    return init, np.column_stack([lower, upper])


def maximize_likelihood(X, y, config: FitConfig | None = None) -> MLEFit:
    """Fit hyperparameters to one dataset by simplex search in log space.

    The first start is the scale-aware default; further restarts draw
    log-uniform starting points inside the bounds from a seeded generator.
    The lowest objective wins, with ties broken by restart order.
    """
    if config is None:
        config = FitConfig()
    X, y = check_dataset(X, y, min_rows=1)
    mean_offset = float(np.mean(y))
    resid = y - mean_offset

    init, box = _default_box(X, resid)
    if config.bounds is not None:
        box = np.asarray(config.bounds, dtype=float)
        if box.shape != (X.shape[1] + 2, 2):
            raise ValueError(
                f"bounds must have shape ({X.shape[1] + 2}, 2), got {box.shape}"
            )
        if np.any(box <= 0.0) or np.any(box[:, 0] > box[:, 1]):
            raise ValueError("bounds must be positive with lower <= upper")
        init = np.clip(init, box[:, 0], box[:, 1])

    sq = _pairwise_sq_diffs(X)
    log_lo, log_hi = np.log(box[:, 0]), np.log(box[:, 1])
    rng = np.random.default_rng(config.seed)

    best = None
    n_failed = 0
    for restart in range(max(1, config.restarts)):
        if restart == 0:
            x0 = np.log(init)
        else:
            x0 = rng.uniform(log_lo, log_hi)
        trace: list[float] = []

        def objective(log_vector):
            try:
                value = _nll_core(sq, resid, np.exp(log_vector))
            except NumericsError:
                return np.inf
            if not trace or value < trace[-1]:
                trace.append(value)
            return value

        result = optimize.minimize(
            objective,
            x0,
            method="Nelder-Mead",
            bounds=optimize.Bounds(log_lo, log_hi),
            options={
                "maxiter": config.max_iters,
                "xatol": config.xatol,
                "fatol": config.fatol,
            },
        )
        if not np.isfinite(result.fun):
            n_failed += 1
            continue
        if best is None or result.fun < best[0]:
            best = (float(result.fun), result.x.copy(), np.array(trace), restart)

    if best is None:
        raise FitFailureError(
            f"all {max(1, config.restarts)} optimization starts failed to produce "
            "a finite objective"
        )

    nll, log_x, trace, restart_index = best
    vector = np.exp(log_x)
    params = Hyperparameters(
        signal_std=float(vector[0]),
        lengthscales=vector[1:-1],
        nugget_std=float(vector[-1]),
        mean_offset=mean_offset,
    )
    at_bounds = np.isclose(log_x, log_lo, rtol=0.0, atol=1e-12) | np.isclose(
        log_x, log_hi, rtol=0.0, atol=1e-12
    )
    return MLEFit(
        params=params,
        nll=nll,
        trace=trace,
        restart_index=restart_index,
        at_bounds=at_bounds,
        bounds=box,
        n_failed_restarts=n_failed,
    )


def fit_hyperparameters(X1, y1, X2, y2, config: FitConfig | None = None) -> Hyperparameters:
    """Fit one shared covariance model to two datasets merged together.

    The mean offset is the pooled sample mean of the merged responses; both
    datasets must share the input dimension and have at least 2 rows each.
    """
    X1, y1 = check_dataset(X1, y1, min_rows=2)
    X2, y2 = check_dataset(X2, y2, min_rows=2)
    if X1.shape[1] != X2.shape[1]:
        raise ValueError(
            f"input dimension mismatch: {X1.shape[1]} vs {X2.shape[1]} columns"
        )
    X = np.vstack([X1, X2])
    y = np.concatenate([y1, y2])
    return maximize_likelihood(X, y, config).params
