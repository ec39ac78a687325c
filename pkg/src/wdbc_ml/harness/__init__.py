"""Experiment runner reproducing the WDBC benchmark table."""

from .config import (
    DEFAULT_SEED,
    ExperimentConfig,
    Model,
    default_config,
    default_suite,
    load_config_file,
)
from .export import EmptyTraceError, export_scatter, export_trace
from .runner import (
    RunReport,
    cross_validate,
    median_accuracies,
    run_experiment,
    run_seeds,
    run_suite,
)
from .tables import render_table, results_csv, write_suite_outputs

__all__ = [
    "DEFAULT_SEED", "ExperimentConfig", "Model", "default_config", "default_suite",
    "load_config_file", "EmptyTraceError", "export_scatter", "export_trace", "RunReport",
    "cross_validate", "median_accuracies", "run_experiment", "run_seeds", "run_suite",
    "render_table", "results_csv", "write_suite_outputs",
]
