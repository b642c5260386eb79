from __future__ import annotations

from ._analysis import (
    GapDistribution,
    MakespanReport,
    brute_force_makespan,
    lpt_offline,
    makespan_report,
    policy_gap_distribution,
    simulate_dynamic,
)
from ._engines import Engine, Execute, SimulatedEngine, ThreadedEngine
from ._policies import Results, run_dynamic, run_policy, run_static
from ._types import Completion, ScheduledTask, Task, TaskSchedule, WorkerHandle

__all__ = [
    "Completion",
    "Engine",
    "Execute",
    "GapDistribution",
    "MakespanReport",
    "Results",
    "ScheduledTask",
    "SimulatedEngine",
    "Task",
    "TaskSchedule",
    "ThreadedEngine",
    "WorkerHandle",
    "brute_force_makespan",
    "lpt_offline",
    "makespan_report",
    "policy_gap_distribution",
    "run_dynamic",
    "run_policy",
    "run_static",
    "simulate_dynamic",
]
