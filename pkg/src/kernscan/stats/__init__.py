"""Statistical analyses."""

from .buckets import EQUAL_COUNT, LOG_HALVING, STRATEGIES, Bucket, Bucketing, Item, bucket_sizes, bucketize
from .logseries import LogSeriesFit, chi2_cdf, chi2_sf, logseries_fit, pmf, solve_theta
from .metrics import (
    RegressionFit,
    churn_regression,
    commitment,
    commitment_distribution,
    origin_regression,
    packets,
    pearson,
)
from .rates import FaultRate, density_per_kloc, fault_rate, relative_rate, relative_rate_fraction
from .survival import (
    CENSOR_MODES,
    IGNORE_FIRST,
    MAX_BOUND,
    MIDPOINT,
    MIN_BOUND,
    YEAR_DAYS,
    CensorConfig,
    Step,
    SurvivalCurve,
    censor_config,
    km_estimate,
    lifespans,
    years,
)
from .tables import read_csv, write_table

__all__ = [
    "CENSOR_MODES", "EQUAL_COUNT", "IGNORE_FIRST", "LOG_HALVING", "MAX_BOUND", "MIDPOINT",
    "MIN_BOUND", "STRATEGIES", "YEAR_DAYS", "Bucket", "Bucketing", "CensorConfig", "FaultRate",
    "Item", "LogSeriesFit", "RegressionFit", "Step", "SurvivalCurve", "bucket_sizes", "bucketize",
    "censor_config", "chi2_cdf", "chi2_sf", "churn_regression", "commitment",
    "commitment_distribution", "density_per_kloc", "fault_rate", "km_estimate", "lifespans",
    "logseries_fit", "origin_regression", "packets", "pearson", "pmf", "read_csv",
    "relative_rate", "relative_rate_fraction", "solve_theta", "write_table", "years",
]
