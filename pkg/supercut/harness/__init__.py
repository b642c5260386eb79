from __future__ import annotations

from ._config import BenchConfig, build_workers, config_from_mapping, load_config
from ._generate import (
    SyntheticImage,
    border_pixels,
    generate_files,
    generate_image,
    generate_problems,
    image_rng,
    problems_for_image,
    read_problems,
    seed_positions,
    write_problems,
)
from ._metrics import best_overlap, overlap
from ._random import random_grid, random_problem
from ._report import describe_report, export_report, load_report
from ._run import BatchTask, RunReport, TaskRunner, build_tasks, replay_makespans, run_benchmark, run_image
from ._verify import (
    SWEEPS,
    Sweep,
    brute_force_min_cut,
    brute_force_sweep,
    decomposition_sweep,
    nestedness_sweep,
    oracle_sweep,
    remote_sweep,
    swap_sweep,
    verify,
)

__all__ = [
    "SWEEPS",
    "BatchTask",
    "BenchConfig",
    "RunReport",
    "Sweep",
    "SyntheticImage",
    "TaskRunner",
    "best_overlap",
    "border_pixels",
    "brute_force_min_cut",
    "brute_force_sweep",
    "build_tasks",
    "build_workers",
    "config_from_mapping",
    "decomposition_sweep",
    "describe_report",
    "export_report",
    "generate_files",
    "generate_image",
    "generate_problems",
    "image_rng",
    "load_config",
    "load_report",
    "nestedness_sweep",
    "oracle_sweep",
    "overlap",
    "problems_for_image",
    "random_grid",
    "random_problem",
    "read_problems",
    "remote_sweep",
    "replay_makespans",
    "run_benchmark",
    "run_image",
    "seed_positions",
    "swap_sweep",
    "verify",
    "write_problems",
]
