"""Local-linear estimation of exposure-driven transition intensities.

Daily infections act as the exposure for new infections and for
hospitalizations. The package estimates the time-varying transition rate
surfaces with or without observed parent/offspring links, selects
bandwidths by cross-validation, simulates the discrete branching model and
forecasts counts under an expert change factor.
"""

from .bandwidth import BandwidthGrid, cv_score, select_bandwidths
from .errors import ConfigError, DataError, ExplosionError, ExposureHawkesError
from .estimation import (
    IntensitySurface,
    IterationDiagnostics,
    estimate_full_info,
    estimate_missing_link,
    fixed_point_residual,
    responsibilities,
)
from .forecast import ForecastResult, c_from_R, extrapolate_mu1, forecast_counts, optimal_c, reproduction_number
from .hawkes_sim import GroundTruth, SCENARIOS, expected_intensity, simulate, simulate_paths
from .kernels import BACKEND, Bandwidths, KernelSpec
from .pairs import PairCounts
from .timeline import CountSeries, Dataset, load_counts

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BandwidthGrid",
    "Bandwidths",
    "ConfigError",
    "CountSeries",
    "DataError",
    "Dataset",
    "ExplosionError",
    "ExposureHawkesError",
    "ForecastResult",
    "GroundTruth",
    "IntensitySurface",
    "IterationDiagnostics",
    "KernelSpec",
    "PairCounts",
    "SCENARIOS",
    "c_from_R",
    "cv_score",
    "estimate_full_info",
    "estimate_missing_link",
    "expected_intensity",
    "extrapolate_mu1",
    "fixed_point_residual",
    "forecast_counts",
    "load_counts",
    "optimal_c",
    "reproduction_number",
    "responsibilities",
    "select_bandwidths",
    "simulate",
    "simulate_paths",
]
