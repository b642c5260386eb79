from __future__ import annotations

import dataclasses
import heapq
import itertools
import logging
import math
from collections.abc import Mapping, Sequence

import numpy as np

from supercut.scheduling._engines import SimulatedEngine
from supercut.scheduling._policies import run_dynamic
from supercut.scheduling._types import ScheduledTask, Task, TaskSchedule, WorkerHandle
from supercut.utils.constants import Policy

logger = logging.getLogger(__name__)


def lpt_offline(durations: Sequence[float], n: int) -> TaskSchedule:
    """
    Largest processing time first, with the durations known in advance.

    Tasks are taken in non-increasing duration order (ties by index) and each
    goes to the least loaded machine (ties by the lower machine id). Task ids are
    the indices into `durations`, worker ids are `0 .. n - 1`.

    Examples:
        >>> lpt_offline([7, 5, 4, 3, 2], 2).makespan
        11
        >>> lpt_offline([7, 5, 4, 3, 2], 2).loads()
        {0: 10, 1: 11}
    """
    if n < 1:
        raise ValueError(f"Need at least one machine, got {n}.")
    order = sorted(range(len(durations)), key=lambda i: -durations[i])
    machines: list[tuple[float, int]] = [(0, machine) for machine in range(n)]
    entries = []
    for index in order:
        load, machine = heapq.heappop(machines)
        finish = load + durations[index]
        entries.append(ScheduledTask(index, machine, load, finish))
        heapq.heappush(machines, (finish, machine))
    return TaskSchedule(tuple(entries), policy=Policy.LPT)


def brute_force_makespan(durations: Sequence[float], n: int) -> float:
    """
    The optimal makespan, by trying every assignment of tasks to machines.

    Only meant for tiny instances, the search space is `n ** len(durations)`.

    Examples:
        >>> brute_force_makespan([3, 1, 3, 1], 2)
        4
    """
    if not durations:
        return 0
    best = math.inf
    # Machines are interchangeable, so the first task can stay on machine 0.
    for rest in itertools.product(range(n), repeat=len(durations) - 1):
        loads: list[float] = [0] * n
        for machine, duration in zip((0, *rest), durations):
            loads[machine] += duration
        best = min(best, max(loads))
    return best


def simulate_dynamic(durations: Sequence[float], workers: Sequence[WorkerHandle]) -> TaskSchedule:
    """Run the dynamic policy on the virtual clock, tasks in index order."""
    tasks = [Task(id=index, duration=duration) for index, duration in enumerate(durations)]
    __, schedule = run_dynamic(tasks, workers, SimulatedEngine())
    return schedule


@dataclasses.dataclass(frozen=True)
class MakespanReport:
    makespans: dict[str, float]
    ratios: dict[tuple[str, str], float]


def makespan_report(schedules: Mapping[str, TaskSchedule]) -> MakespanReport:
    """
    Compare the makespans of differently scheduled runs of the same batch.

    `ratios[(a, b)]` is the makespan of `a` divided by the makespan of `b`.
    """
    makespans = {label: schedule.makespan for label, schedule in schedules.items()}
    ratios = {}
    for a, b in itertools.permutations(makespans, 2):
        if makespans[b]:
            ratios[(a, b)] = makespans[a] / makespans[b]
        else:
            ratios[(a, b)] = 1.0 if not makespans[a] else math.inf
    return MakespanReport(makespans=makespans, ratios=ratios)


@dataclasses.dataclass(frozen=True)
class GapDistribution:
    """Dynamic over LPT makespan ratios on random workloads."""

    ratios: tuple[float, ...]

    @property
    def mean(self) -> float:
        return float(np.mean(self.ratios))

    @property
    def minimum(self) -> float:
        return float(np.min(self.ratios))

    @property
    def maximum(self) -> float:
        return float(np.max(self.ratios))


def policy_gap_distribution(
    rng: np.random.Generator,
    *,
    instances: int = 100,
    tasks: int = 20,
    workers: int = 2,
) -> GapDistribution:
    """
    Measure how much LPT gains over the dynamic policy on synthetic workloads.

    Durations are log-normally distributed, which gives the heavy tailed mix of
    easy and hard supergraphs a real batch has. Nothing gets asserted about the
    result, the gap depends entirely on the workload.
    """
    handles = [WorkerHandle(id=index) for index in range(workers)]
    ratios = []
    for __ in range(instances):
        durations = rng.lognormal(mean=0.0, sigma=0.5, size=tasks).tolist()
        dynamic = simulate_dynamic(durations, handles).makespan
        ratios.append(dynamic / lpt_offline(durations, workers).makespan)
    distribution = GapDistribution(tuple(ratios))
    logger.info(
        f"Dynamic/LPT makespan ratio over {instances} workloads: mean {distribution.mean:.4f}, "
        f"min {distribution.minimum:.4f}, max {distribution.maximum:.4f}."
    )
    return distribution
