"""CSV ingestion and report serialization.

All writers are atomic (write to a temp file, then rename) and format
floats with `repr`, so a written file round-trips exactly and repeated
writes of the same data are byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
import os
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "IngestResult",
    "ingest_csv",
    "write_dataset_csv",
    "write_band_csv",
    "write_json_report",
    "atomic_write_text",
]


class IngestResult(NamedTuple):
    X: np.ndarray
    y: np.ndarray
    summary: dict


def ingest_csv(path, input_cols: Sequence[str], response_col: str) -> IngestResult:
    """Load named input and response columns from a CSV file.

    Returns the (n, d) input array, the n response values, and a summary
    with the row count and per-column min/max. Raises ValueError naming
    the offending row (by physical file line, header = line 1) for cells
    that do not parse as finite numbers, and for files with fewer than
    two data rows.
    """
    path = Path(path)
    columns = list(input_cols) + [response_col]
    rows: list[list[float]] = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [c for c in columns if c not in header]
        if missing:
            raise ValueError(f"{path.name}: missing column(s) {', '.join(missing)}")
        for record in reader:
            line = reader.line_num
            parsed = []
            for col in columns:
                cell = record[col]
                try:
                    value = float(cell)
                except (TypeError, ValueError):
                    raise ValueError(
                        f"{path.name}: cannot parse {col}={cell!r} at row {line}"
                    ) from None
                if not math.isfinite(value):
                    raise ValueError(
                        f"{path.name}: non-finite value {col}={cell!r} at row {line}"
                    )
                parsed.append(value)
            rows.append(parsed)
    if len(rows) < 2:
        raise ValueError(f"{path.name}: need at least 2 data rows, found {len(rows)}")
    data = np.asarray(rows, dtype=float)
    X = data[:, :-1]
    y = data[:, -1]
    summary = {
        "rows": len(rows),
        "columns": {
            col: {"min": float(data[:, j].min()), "max": float(data[:, j].max())}
            for j, col in enumerate(columns)
        },
    }
    return IngestResult(X, y, summary)


def atomic_write_text(path, text: str) -> None:
    """Write text to ``path`` via a temp file in the same directory."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def write_dataset_csv(path, X, y, input_cols: Sequence[str], response_col: str) -> None:
    """Write a dataset as CSV with exact (repr) float formatting."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if len(input_cols) != X.shape[1]:
        raise ValueError("one input column name is needed per input dimension")
    lines = [",".join(list(input_cols) + [response_col])]
    for row, resp in zip(X, y):
        lines.append(",".join(repr(float(v)) for v in row) + "," + repr(float(resp)))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_band_csv(path, band, input_cols: Sequence[str]) -> None:
    """Flat per-grid-point table: inputs, diff, lower, upper, delta."""
    grid = band.grid
    header = list(input_cols) + ["diff", "lower", "upper", "delta"]
    lines = [",".join(header)]
    for j in range(grid.shape[0]):
        cells = [repr(float(v)) for v in grid[j]]
        cells += [
            repr(float(band.diff[j])),
            repr(float(band.lower[j])),
            repr(float(band.upper[j])),
            repr(float(band.delta[j])),
        ]
        lines.append(",".join(cells))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json_report(path, band, params, config: dict) -> None:
    """Full machine-readable comparison report.

    Captures the resolved configuration, the fitted hyperparameters, the
    grid with all band vectors, and the decision, so the rejected
    percentage and decision can be recomputed from the file alone.
    """
    report = {
        "config": config,
        "hyperparameters": {
            "signal_std": float(params.signal_std),
            "lengthscales": [float(v) for v in params.lengthscales],
            "nugget_std": float(params.nugget_std),
            "mean_offset": float(params.mean_offset),
        },
        "alpha": float(band.alpha),
        "radius": float(band.radius),
        "n_components": int(band.basis.m),
        "band_samples": int(band.band_samples),
        "sampler_acceptance_rate": float(band.sampler_acceptance_rate),
        "decision": band.decision,
        "rejected_percent": float(band.rejected_percent),
        "grid": [[float(v) for v in row] for row in band.grid],
        "diff": [float(v) for v in band.diff],
        "lower": [float(v) for v in band.lower],
        "upper": [float(v) for v in band.upper],
        "delta": [float(v) for v in band.delta],
    }
    atomic_write_text(path, json.dumps(report, indent=2, sort_keys=True) + "\n")
