"""Evenly spaced test grids over rectangular domains."""

from __future__ import annotations

import numpy as np

from .validation import check_box, check_inputs

__all__ = ["make_grid", "check_grid"]


def make_grid(bounds, grid_size: int) -> np.ndarray:
    """Lattice of grid_size points over the box, endpoints included.

    For d dimensions grid_size must be a perfect d-th power; the lattice is
    the cross product of per-axis linspaces, with the first axis varying
    slowest.
    """
    box = check_box(bounds)
    d = box.shape[0]
    if grid_size < 2:
        raise ValueError(f"grid_size must be at least 2, got {grid_size}")
    if d == 1:
        return np.linspace(box[0, 0], box[0, 1], grid_size)[:, None]

    per_axis = None
    root = grid_size ** (1.0 / d)
    for candidate in (int(np.floor(root)), int(np.ceil(root))):
        if candidate >= 2 and candidate**d == grid_size:
            per_axis = candidate
            break
    if per_axis is None:
        lo = max(2, int(np.floor(root)))
        raise ValueError(
            f"grid_size {grid_size} is not a perfect power for {d} dimensions; "
            f"nearest valid sizes are {lo**d} and {(lo + 1)**d}"
        )
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def check_grid(points, bounds=None) -> np.ndarray:
    """Validate a set of test points: finite, >= 2 unique rows, inside bounds."""
    points = check_inputs(points)
    if points.shape[0] < 2:
        raise ValueError(f"grid needs at least 2 points, got {points.shape[0]}")
    if np.unique(points, axis=0).shape[0] != points.shape[0]:
        raise ValueError("grid contains duplicate rows")
    if bounds is not None:
        box = check_box(bounds, n_dims=points.shape[1])
        if np.any(points < box[:, 0]) or np.any(points > box[:, 1]):
            raise ValueError("grid points fall outside the stated bounds")
    return points
