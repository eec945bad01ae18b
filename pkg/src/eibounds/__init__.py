"""Partial-identification bounds and conservative confidence intervals for 2x2 ecological inference."""

from .data import DataError, Dataset, Precinct, dump_dataset, load_dataset, read_csv, true_district_b, write_csv
from .dd import Interval, district_dd, precinct_w_bounds
from .district import (
    AnalysisConfig,
    DistrictAnalysis,
    analyze,
    confidence_interval,
    district_weights,
    point_estimate_b,
    regression_bound,
)
from .regression import RegressionFit, Theta, fit_quadratic
from .selection import EvalConfig, aggregate_report, apply_heuristics, evaluate_dataset, normal_cdf
from .simulation import GeneratorSpec, coverage_experiment, generate
from .w1 import (
    ConstraintSet,
    W1Bound,
    auto_domain,
    constraint_set,
    prop2_constraints,
    prop3_constraints,
    w1_bound,
    w1_bound_nonparametric,
)

__version__ = "0.1.0"
