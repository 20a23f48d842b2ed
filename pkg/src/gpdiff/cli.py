"""Command-line interface.

Two subcommands:

``compare``
    Read two CSV datasets, fit the comparison, print the decision, and
    optionally write a JSON report, a flat CSV band table, and (for
    one-dimensional inputs) an SVG plot.  Exit code 0 means the equality
    hypothesis is accepted, 1 means rejected, 2 means any error.

``benchmark``
    Estimate type I / type II error rates for one of the built-in
    benchmark functions and write one results row per requested dataset
    size.

Report files are written atomically and are byte-identical across
repeated invocations with the same flags and seed.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from .benchmarks import estimate_error_rates, sim_function
from .comparator import FunctionComparator
from .dataio import atomic_write_text, ingest_csv, write_band_csv, write_json_report
from .mle import FitConfig

__all__ = ["main", "build_parser", "parse_bounds"]

_PRESET_DEFAULTS = {"powercurve": {"alpha": 0.10, "grid_size": 1000}}
_POWERCURVE_WINDOW = (5.0, 15.0)


def parse_bounds(text: str) -> np.ndarray:
    """Parse ``lo:hi[,lo:hi...]`` into a (d, 2) bounds array."""
    pairs = []
    for token in text.split(","):
        parts = token.split(":")
        if len(parts) != 2:
            raise ValueError(f"bounds token {token!r} is not of the form lo:hi")
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except ValueError:
            raise ValueError(f"bounds token {token!r} is not numeric") from None
        if not lo < hi:
            raise ValueError(f"bounds token {token!r} needs lo < hi")
        pairs.append((lo, hi))
    return np.asarray(pairs, dtype=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpdiff",
        description="Decide whether two noisy datasets describe the same function.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cmp_p = sub.add_parser(
        "compare", help="compare two CSV datasets and report accept/reject"
    )
    cmp_p.add_argument("data1", help="CSV file with the first dataset")
    cmp_p.add_argument("data2", help="CSV file with the second dataset")
    cmp_p.add_argument(
        "--input-cols", required=True,
        help="comma-separated input column names (order defines dimensions)",
    )
    cmp_p.add_argument("--response-col", required=True, help="response column name")
    cmp_p.add_argument("--alpha", type=float, default=None,
                       help="significance level (default 0.05)")
    cmp_p.add_argument("--grid-size", type=int, default=None,
                       help="comparison grid size (default 500)")
    cmp_p.add_argument("--band-samples", type=int, default=1000,
                       help="confidence-set samples behind the band")
    cmp_p.add_argument("--seed", type=int, default=0, help="random seed")
    cmp_p.add_argument("--threshold-ratio", type=float, default=1e-6,
                       help="relative eigenvalue cutoff for truncation")
    cmp_p.add_argument("--truncation", type=int, default=None,
                       help="fixed number of retained components")
    cmp_p.add_argument("--bounds", type=parse_bounds, default=None,
                       help="comparison region as lo:hi[,lo:hi...], one pair per input")
    cmp_p.add_argument("--restarts", type=int, default=None,
                       help="hyperparameter optimizer restarts")
    cmp_p.add_argument(
        "--preset", choices=sorted(_PRESET_DEFAULTS), default=None,
        help="powercurve: single wind-speed input, alpha 0.10, grid 1000, "
             "bounds clipped to the 5-15 m/s window",
    )
    cmp_p.add_argument("--out", default=None,
                       help="directory for report.json, band.csv and band.svg")
    cmp_p.set_defaults(func=run_compare)

    bench_p = sub.add_parser(
        "benchmark", help="estimate error rates on a built-in benchmark function"
    )
    bench_p.add_argument("function", help="gp-sample, piston or borehole")
    bench_p.add_argument("--runs", type=int, default=100,
                         help="Monte Carlo repetitions per error kind")
    bench_p.add_argument("--n", default="200",
                         help="comma-separated dataset sizes, one results row each")
    bench_p.add_argument("--grid-size", type=int, default=None,
                         help="comparison grid size (default 500 in 1-d, 400 in 2-d)")
    bench_p.add_argument("--alpha", type=float, default=0.05)
    bench_p.add_argument("--seed", type=int, default=0)
    bench_p.add_argument("--truncation", type=int, default=None)
    bench_p.add_argument("--band-samples", type=int, default=1000)
    bench_p.add_argument("--threshold-ratio", type=float, default=1e-6)
    bench_p.add_argument("--restarts", type=int, default=None)
    bench_p.add_argument("--type", choices=["both", "type1", "type2"], default="both",
                         help="which error kinds to estimate")
    bench_p.add_argument("--shared-fit", action="store_true",
                         help="fit hyperparameters once on a pilot pair (faster, "
                              "deviates from the per-run protocol)")
    bench_p.add_argument("--out", default=None, help="directory for results.csv")
    bench_p.set_defaults(func=run_benchmark)
    return parser


def _summary_line(name: str, summary: dict) -> str:
    spans = "; ".join(
        f"{col} in [{stats['min']:g}, {stats['max']:g}]"
        for col, stats in summary["columns"].items()
    )
    return f"{name}: {summary['rows']} rows; {spans}"


def _resolve_compare_settings(args, X1, X2):
    """Apply preset defaults; explicit flags always win."""
    preset = _PRESET_DEFAULTS.get(args.preset, {})
    alpha = args.alpha if args.alpha is not None else preset.get("alpha", 0.05)
    grid_size = (
        args.grid_size if args.grid_size is not None else preset.get("grid_size", 500)
    )
    bounds = args.bounds
    if bounds is None and args.preset == "powercurve":
        if X1.shape[1] != 1:
            raise ValueError(
                "the powercurve preset expects a single wind-speed input column"
            )
        lo_win, hi_win = _POWERCURVE_WINDOW
        lo = max(lo_win, X1[:, 0].min(), X2[:, 0].min())
        hi = min(hi_win, X1[:, 0].max(), X2[:, 0].max())
        if not lo < hi:
            raise ValueError(
                f"datasets do not overlap inside the {lo_win:g}-{hi_win:g} window"
            )
        bounds = np.array([[lo, hi]])
    return alpha, grid_size, bounds


def run_compare(args) -> int:
    input_cols = [c.strip() for c in args.input_cols.split(",") if c.strip()]
    if not input_cols:
        raise ValueError("--input-cols needs at least one column name")

    X1, y1, summary1 = ingest_csv(args.data1, input_cols, args.response_col)
    X2, y2, summary2 = ingest_csv(args.data2, input_cols, args.response_col)
    print(_summary_line(Path(args.data1).name, summary1))
    print(_summary_line(Path(args.data2).name, summary2))

    alpha, grid_size, bounds = _resolve_compare_settings(args, X1, X2)
    fit_kwargs = {"seed": args.seed}
    if args.restarts is not None:
        fit_kwargs["restarts"] = args.restarts
    comparator = FunctionComparator(
        alpha=alpha,
        grid_size=grid_size,
        bounds=bounds,
        band_samples=args.band_samples,
        threshold_ratio=args.threshold_ratio,
        truncation=args.truncation,
        seed=args.seed,
        fit_config=FitConfig(**fit_kwargs),
    )
    comparator.fit(X1, y1, X2, y2)
    band = comparator.band_

    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        config = {
            "data1": str(args.data1),
            "data2": str(args.data2),
            "input_cols": input_cols,
            "response_col": args.response_col,
            "alpha": alpha,
            "grid_size": grid_size,
            "band_samples": args.band_samples,
            "seed": args.seed,
            "threshold_ratio": args.threshold_ratio,
            "truncation": args.truncation,
            "bounds": None if bounds is None else [[float(l), float(h)] for l, h in bounds],
            "preset": args.preset,
            "restarts": args.restarts,
        }
        write_json_report(out / "report.json", band, comparator.params_, config)
        write_band_csv(out / "band.csv", band, input_cols)
        if X1.shape[1] == 1:
            from .plotting import render_band_svg

            atomic_write_text(out / "band.svg", render_band_svg(band))
        print(f"report written to {out}")

    print(
        f"decision: {band.decision} "
        f"({band.rejected_percent:.1f}% of grid outside the band; "
        f"radius {band.radius:.3f}, {band.basis.m} components)"
    )
    return 0 if band.decision == "accept" else 1


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def run_benchmark(args) -> int:
    fn = sim_function(args.function)
    try:
        sizes = [int(tok) for tok in args.n.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"--n must be comma-separated integers, got {args.n!r}") from None
    if not sizes:
        raise ValueError("--n needs at least one dataset size")
    d = fn.domain_box.shape[0]
    grid_size = args.grid_size if args.grid_size is not None else (500 if d == 1 else 400)
    include = ("type1", "type2") if args.type == "both" else (args.type,)
    fit_config = FitConfig(restarts=args.restarts) if args.restarts is not None else None

    fields = [
        "function", "runs", "n_per_dataset", "grid_size", "alpha", "truncation",
        "seed", "shared_fit", "type1_rate", "type2_rate", "l2_dist_percent",
        "failures_type1", "failures_type2",
    ]
    lines = [",".join(fields)]
    started = time.perf_counter()
    failures_total = 0
    for n in sizes:
        report = estimate_error_rates(
            fn,
            runs=args.runs,
            n_per_dataset=n,
            grid_size=grid_size,
            alpha=args.alpha,
            truncation=args.truncation,
            seed=args.seed,
            threshold_ratio=args.threshold_ratio,
            band_samples=args.band_samples,
            fit_config=fit_config,
            shared_fit=args.shared_fit,
            include=include,
        )
        failures_total += report.failures_type1 + report.failures_type2
        row = {
            "function": report.function_name,
            "runs": report.runs,
            "n_per_dataset": report.n_per_dataset,
            "grid_size": report.grid_size,
            "alpha": report.alpha,
            "truncation": report.truncation,
            "seed": report.seed,
            "shared_fit": report.shared_fit,
            "type1_rate": report.type1_rate,
            "type2_rate": report.type2_rate,
            "l2_dist_percent": report.l2_dist_percent,
            "failures_type1": report.failures_type1,
            "failures_type2": report.failures_type2,
        }
        lines.append(",".join(_format_cell(row[f]) for f in fields))
        shown = {
            "type1": "-" if report.type1_rate is None else f"{report.type1_rate:.3f}",
            "type2": "-" if report.type2_rate is None else f"{report.type2_rate:.3f}",
        }
        print(
            f"{report.function_name} n={n} grid={grid_size}: "
            f"type1={shown['type1']} type2={shown['type2']} "
            f"l2%={report.l2_dist_percent:.2f} "
            f"failures={report.failures_type1}/{report.failures_type2}"
        )
    elapsed = time.perf_counter() - started
    print(f"total runtime {elapsed:.1f}s, {failures_total} failed runs")

    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        atomic_write_text(out / "results.csv", "\n".join(lines) + "\n")
        print(f"results written to {out / 'results.csv'}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # CLI boundary: report any failure as exit code 2
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
