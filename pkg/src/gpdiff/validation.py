"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

import numpy as np

__all__ = ["check_inputs", "check_dataset", "check_box"]


def check_inputs(X, n_dims: int | None = None) -> np.ndarray:
    """Coerce X to a finite float array of shape (n, d); 1-d input becomes one column."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"inputs must be a 2-d array, got {X.ndim} dimensions")
    if X.shape[0] == 0 or X.shape[1] == 0:
        raise ValueError("inputs must contain at least one row and one column")
    if not np.all(np.isfinite(X)):
        raise ValueError("inputs contain non-finite values")
    if n_dims is not None and X.shape[1] != n_dims:
        raise ValueError(f"expected {n_dims} input columns, got {X.shape[1]}")
    return X


def check_dataset(X, y, min_rows: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Validate an (inputs, responses) pair and return float arrays."""
    X = check_inputs(X)
    y = np.asarray(y, dtype=float)
    if y.ndim == 2 and y.shape[1] == 1:
        y = y[:, 0]
    if y.ndim != 1:
        raise ValueError("responses must be a 1-d array")
    if y.shape[0] != X.shape[0]:
        raise ValueError(
            f"inputs have {X.shape[0]} rows but responses have {y.shape[0]}"
        )
    if not np.all(np.isfinite(y)):
        raise ValueError("responses contain non-finite values")
    if X.shape[0] < min_rows:
        raise ValueError(f"need at least {min_rows} rows, got {X.shape[0]}")
    return X, y


def check_box(bounds, n_dims: int | None = None) -> np.ndarray:
    """Validate a (d, 2) box of per-dimension (lower, upper) bounds."""
    box = np.asarray(bounds, dtype=float)
    if box.ndim == 1 and box.size == 2:
        box = box[None, :]
    if box.ndim != 2 or box.shape[1] != 2:
        raise ValueError("bounds must have shape (n_dims, 2)")
    if not np.all(np.isfinite(box)):
        raise ValueError("bounds contain non-finite values")
    if np.any(box[:, 0] >= box[:, 1]):
        raise ValueError("each lower bound must be strictly below its upper bound")
    if n_dims is not None and box.shape[0] != n_dims:
        raise ValueError(f"expected bounds for {n_dims} dimensions, got {box.shape[0]}")
    return box
