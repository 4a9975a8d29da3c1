"""CLI commands, run configuration, dataset files, scaling benchmark."""

from .bench import MemoryReport, bench_scale, linear_fit_r_squared
from .config import RunConfig, load_run_config, run_config_from_dict, write_resolved_config
from .datafiles import load_dataset, save_dataset
from .main import evaluate_groups, main

__all__ = [
    "MemoryReport",
    "RunConfig",
    "bench_scale",
    "evaluate_groups",
    "linear_fit_r_squared",
    "load_dataset",
    "load_run_config",
    "main",
    "run_config_from_dict",
    "save_dataset",
    "write_resolved_config",
]
