"""Two-sample comparison of noisy curves and surfaces with GP confidence bands."""

from .bands import (
    DifferenceBand,
    KLBasis,
    build_band,
    chi_square_radius,
    difference_covariance,
    kl_decompose,
    sample_confidence_set,
)
from .benchmarks import (
    BenchmarkReport,
    DatasetPair,
    SimFunction,
    borehole_flow_rate,
    draw_dataset_pair,
    estimate_error_rates,
    gp_sample_draw,
    l2_dist_percent,
    piston_cycle_time,
    sim_function,
    sine_bump,
)
from .comparator import FunctionComparator
from .dataio import IngestResult, ingest_csv, write_dataset_csv
from .exceptions import DegenerateCovarianceError, FitFailureError, NumericsError
from .gp import GPRegressor
from .grid import check_grid, make_grid
from .kernels import Hyperparameters, cov_matrix, kernel_value
from .mle import FitConfig, MLEFit, fit_hyperparameters, maximize_likelihood, neg_log_likelihood

__version__ = "0.1.0"

__all__ = [
    "BenchmarkReport",
    "DatasetPair",
    "DegenerateCovarianceError",
    "DifferenceBand",
    "FitConfig",
    "FitFailureError",
    "FunctionComparator",
    "GPRegressor",
    "Hyperparameters",
    "IngestResult",
    "KLBasis",
    "MLEFit",
    "NumericsError",
    "SimFunction",
    "borehole_flow_rate",
    "build_band",
    "check_grid",
    "chi_square_radius",
    "cov_matrix",
    "difference_covariance",
    "draw_dataset_pair",
    "estimate_error_rates",
    "fit_hyperparameters",
    "gp_sample_draw",
    "ingest_csv",
    "kernel_value",
    "kl_decompose",
    "l2_dist_percent",
    "make_grid",
    "maximize_likelihood",
    "neg_log_likelihood",
    "piston_cycle_time",
    "sample_confidence_set",
    "sim_function",
    "sine_bump",
    "write_dataset_csv",
    "__version__",
]
