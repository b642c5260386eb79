from __future__ import annotations

import dataclasses
from collections import defaultdict
from collections.abc import Iterable, Sequence
from typing import Any, Optional

from supercut.graphs import GridGraph
from supercut.supergraphs import SupergraphLayout
from supercut.utils.constants import WorkerKind
from supercut.utils.exceptions import ConfigError


@dataclasses.dataclass(frozen=True)
class Task:
    """
    One supergraph cut to compute.

    Attributes:
        id: Unique within a batch.
        graph: The composite graph, can be left out in pure simulations.
        layout: Layout of `graph`.
        duration: Known processing time, used by the simulated engine and LPT.
    """

    id: int
    graph: Optional[GridGraph] = None
    layout: Optional[SupergraphLayout] = None
    duration: Optional[float] = None

    def __repr__(self) -> str:
        return f"<Task:{self.id}>"


@dataclasses.dataclass(frozen=True)
class WorkerHandle:
    """
    A computing node that tasks can be sent to.

    Attributes:
        id: Unique among the workers of a run.
        kind: `WorkerKind.LOCAL` (a thread) or `WorkerKind.REMOTE`.
        endpoint: `host:port`, present exactly for remote workers.
        slots: How many tasks the worker may run at once.
        speed: Relative speed for the simulated engine, durations get divided by it.
    """

    id: int
    kind: str = WorkerKind.LOCAL
    endpoint: Optional[str] = None
    slots: int = 1
    speed: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in WorkerKind.ALL:
            raise ConfigError(f"unknown worker kind `{self.kind}`")
        if self.slots < 1:
            raise ConfigError(f"worker {self.id} has {self.slots} slots")
        if self.speed <= 0:
            raise ConfigError(f"worker {self.id} has speed {self.speed}")
        if (self.kind == WorkerKind.REMOTE) != (self.endpoint is not None):
            raise ConfigError(f"worker {self.id}: an endpoint is required for remote workers only")

    def __str__(self) -> str:
        return f"{self.kind}#{self.id}" + (f"@{self.endpoint}" if self.endpoint else "")


@dataclasses.dataclass(frozen=True)
class ScheduledTask:
    task_id: int
    worker_id: int
    start: float
    finish: float
    attempt: int = 1

    @property
    def duration(self) -> float:
        return self.finish - self.start


@dataclasses.dataclass(frozen=True)
class Completion:
    """What an engine reports back once a task is done, successfully or not."""

    task: Task
    worker: WorkerHandle
    start: float
    finish: float
    result: Any = None
    error: Optional[BaseException] = None


@dataclasses.dataclass(frozen=True)
class TaskSchedule:
    """
    Where and when every task of a batch ran.

    `entries` holds the successful run of every task, `failures` the attempts
    that failed and got retried.
    """

    entries: tuple[ScheduledTask, ...]
    policy: str = ""
    failures: tuple[ScheduledTask, ...] = ()

    @property
    def makespan(self) -> float:
        return max((entry.finish for entry in self.entries), default=0.0)

    def by_worker(self) -> dict[int, list[ScheduledTask]]:
        grouped: defaultdict[int, list[ScheduledTask]] = defaultdict(list)
        for entry in sorted(self.entries, key=lambda e: (e.start, e.task_id)):
            grouped[entry.worker_id].append(entry)
        return dict(grouped)

    def loads(self) -> dict[int, float]:
        return {worker: sum(e.duration for e in entries) for worker, entries in self.by_worker().items()}

    def validate(self, task_ids: Iterable[int], workers: Sequence[WorkerHandle]) -> None:
        """
        Check that every task ran exactly once and no worker exceeded its slots.

        Raises:
            AssertionError: With a description of the first broken invariant.
        """
        ids = sorted(entry.task_id for entry in self.entries)
        assert ids == sorted(task_ids), f"tasks {ids} ran, expected {sorted(task_ids)}"
        slots = {worker.id: worker.slots for worker in workers}
        for worker_id, entries in self.by_worker().items():
            events = sorted(
                [(e.start, 1) for e in entries] + [(e.finish, -1) for e in entries],
                # Finishing before starting at the same instant.
                key=lambda event: (event[0], event[1]),
            )
            running = 0
            for __, change in events:
                running += change
                assert running <= slots[worker_id], f"worker {worker_id} ran {running} tasks at once"
