from __future__ import annotations

import heapq
import itertools
import logging
import queue
import time
from collections.abc import Collection
from concurrent.futures import ThreadPoolExecutor
from types import TracebackType
from typing import Any, Callable, Optional, Protocol

from supercut.scheduling._types import Completion, Task, WorkerHandle
from supercut.utils.exceptions import WorkerFailure

logger = logging.getLogger(__name__)

Execute = Callable[[Task, WorkerHandle], Any]


class Engine(Protocol):
    """Runs tasks on workers and hands back their completions one at a time."""

    def submit(self, task: Task, worker: WorkerHandle) -> None:
        ...

    def next_completion(self) -> Completion:
        """Block until the next task finishes."""

    def now(self) -> float:
        ...


class SimulatedEngine:
    """
    An engine on a virtual clock.

    A task takes `task.duration / worker.speed` time units. Completions come out
    in order of their finish time, ties in submission order, so every schedule is
    fully deterministic.

    Args:
        execute: Optionally compute the actual result of each task as well.
        failures: `(task_id, worker_id)` pairs that fail when they finish.
    """

    def __init__(
        self,
        execute: Optional[Execute] = None,
        failures: Collection[tuple[int, int]] = (),
    ) -> None:
        self.execute = execute
        self.failures = set(failures)
        self.clock = 0.0
        self._events: list[tuple[float, int, Completion]] = []
        self._sequence = itertools.count()

    def submit(self, task: Task, worker: WorkerHandle) -> None:
        if task.duration is None:
            raise ValueError(f"{task!r} has no duration to simulate.")
        finish = self.clock + task.duration / worker.speed
        error: Optional[BaseException] = None
        result = None
        if (task.id, worker.id) in self.failures:
            error = WorkerFailure(worker, task.id, "injected failure")
        elif self.execute is not None:
            result = self.execute(task, worker)
        completion = Completion(task, worker, self.clock, finish, result, error)
        heapq.heappush(self._events, (finish, next(self._sequence), completion))

    def next_completion(self) -> Completion:
        finish, __, completion = heapq.heappop(self._events)
        self.clock = finish
        return completion

    def now(self) -> float:
        return self.clock


class ThreadedEngine:
    """
    An engine that runs tasks on a thread pool and measures wall-clock time.

    Completions get delivered through a queue, so they can always be handed in
    even while the dispatcher is blocked waiting for one.
    """

    def __init__(self, execute: Execute, threads: int) -> None:
        self.execute = execute
        self._pool = ThreadPoolExecutor(max_workers=max(threads, 1), thread_name_prefix="supercut-task")
        self._completions: queue.Queue[Completion] = queue.Queue()
        self._epoch = time.perf_counter()

    def __enter__(self) -> ThreadedEngine:
        return self

    def __exit__(
        self,
        exc_type: Optional[type[BaseException]],
        exc_value: Optional[BaseException],
        traceback: Optional[TracebackType],
    ) -> None:
        self.close()

    def close(self) -> None:
        self._pool.shutdown(wait=True)

    def now(self) -> float:
        return time.perf_counter() - self._epoch

    def submit(self, task: Task, worker: WorkerHandle) -> None:
        self._pool.submit(self._run, task, worker)

    def next_completion(self) -> Completion:
        return self._completions.get()

    def _run(self, task: Task, worker: WorkerHandle) -> None:
        start = self.now()
        try:
            result = self.execute(task, worker)
        except Exception as exc:  # pylint: disable=broad-except
            logger.debug(f"{task!r} failed on {worker}: {exc!r}")
            self._completions.put(Completion(task, worker, start, self.now(), error=exc))
        else:
            self._completions.put(Completion(task, worker, start, self.now(), result))
