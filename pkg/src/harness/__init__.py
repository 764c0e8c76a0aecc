from src.harness.config import (
    ExperimentConfig,
    MinDistSettings,
    NpmleSettings,
    expand_quantities,
    load_config,
    parse_config,
)
from src.harness.experiment import (
    EstimateReport,
    fit_mixing,
    read_reports,
    reports_frame,
    run_experiment,
    simulate_experiment,
    worker_count,
    write_frame,
    write_reports,
)
from src.harness.rates import is_non_increasing, scaled_column, summarize

__all__ = [
    "EstimateReport",
    "ExperimentConfig",
    "MinDistSettings",
    "NpmleSettings",
    "expand_quantities",
    "fit_mixing",
    "is_non_increasing",
    "load_config",
    "parse_config",
    "read_reports",
    "reports_frame",
    "run_experiment",
    "scaled_column",
    "simulate_experiment",
    "summarize",
    "worker_count",
    "write_frame",
    "write_reports",
]
