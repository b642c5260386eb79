from __future__ import annotations

import logging
from collections import deque
from collections.abc import Sequence
from typing import Any

from supercut.scheduling._engines import Engine
from supercut.scheduling._types import ScheduledTask, Task, TaskSchedule, WorkerHandle
from supercut.utils.constants import Errors, Policy
from supercut.utils.exceptions import BatchAborted, ConfigError

logger = logging.getLogger(__name__)

Results = dict[int, Any]


def _check_batch(tasks: Sequence[Task], workers: Sequence[WorkerHandle]) -> None:
    if not workers:
        raise ConfigError("at least one worker is needed")
    if len({task.id for task in tasks}) != len(tasks):
        raise ValueError("Task ids have to be unique within a batch.")
    if len({worker.id for worker in workers}) != len(workers):
        raise ValueError("Worker ids have to be unique.")


def run_static(
    tasks: Sequence[Task],
    workers: Sequence[WorkerHandle],
    engine: Engine,
) -> tuple[Results, TaskSchedule]:
    """
    Run task `i` on worker `i mod n`, each worker going through its tasks in order.

    Raises:
        BatchAborted: On the first failing task, there are no retries.
    """
    _check_batch(tasks, workers)
    queues: list[deque[Task]] = [deque(tasks[i :: len(workers)]) for i in range(len(workers))]
    results: Results = {}
    entries: list[ScheduledTask] = []

    in_flight = 0
    for worker, tasks_left in zip(workers, queues):
        if tasks_left:
            engine.submit(tasks_left.popleft(), worker)
            in_flight += 1

    while in_flight:
        done = engine.next_completion()
        in_flight -= 1
        if done.error is not None:
            logger.error(f"{done.task!r} failed on {done.worker}, aborting the static batch.")
            raise BatchAborted(done.task.id, done.error, done.error)
        results[done.task.id] = done.result
        entries.append(ScheduledTask(done.task.id, done.worker.id, done.start, done.finish))
        tasks_left = queues[workers.index(done.worker)]
        if tasks_left:
            engine.submit(tasks_left.popleft(), done.worker)
            in_flight += 1

    schedule = TaskSchedule(tuple(entries), policy=Policy.STATIC)
    logger.info(f"Static batch of {len(tasks)} tasks done, makespan {schedule.makespan:.3f}.")
    return results, schedule


def _slot_tokens(workers: Sequence[WorkerHandle]) -> deque[WorkerHandle]:
    """The initial FIFO of free slots: first slots of all workers, then second slots..."""
    tokens: deque[WorkerHandle] = deque()
    for slot in range(max(worker.slots for worker in workers)):
        tokens.extend(worker for worker in workers if slot < worker.slots)
    return tokens


def run_dynamic(
    tasks: Sequence[Task],
    workers: Sequence[WorkerHandle],
    engine: Engine,
) -> tuple[Results, TaskSchedule]:
    """
    Give each task to the worker at the head of the FIFO of free worker slots.

    A slot goes back to the tail of the FIFO when its task completes, and dispatch
    blocks while the FIFO is empty. A failing worker is dropped for good and its
    task gets dispatched one more time.

    Raises:
        BatchAborted: When a task fails twice or no workers are left.
    """
    _check_batch(tasks, workers)
    tokens = _slot_tokens(workers)
    pending = deque(tasks)
    alive = {worker.id for worker in workers}
    retried: set[int] = set()
    results: Results = {}
    entries: list[ScheduledTask] = []
    failures: list[ScheduledTask] = []
    in_flight = 0

    while pending or in_flight:
        while pending and tokens:
            worker = tokens.popleft()
            task = pending.popleft()
            logger.debug(f"Dispatching {task!r} to {worker}.")
            engine.submit(task, worker)
            in_flight += 1

        done = engine.next_completion()
        in_flight -= 1
        attempt = 2 if done.task.id in retried else 1
        record = ScheduledTask(done.task.id, done.worker.id, done.start, done.finish, attempt)

        if done.error is None:
            results[done.task.id] = done.result
            entries.append(record)
            if done.worker.id in alive:
                tokens.append(done.worker)
            continue

        failures.append(record)
        logger.warning(f"{done.task!r} failed on {done.worker}, dropping the worker: {done.error}")
        alive.discard(done.worker.id)
        tokens = deque(token for token in tokens if token.id in alive)
        if done.task.id in retried:
            raise BatchAborted(done.task.id, "failed twice", done.error)
        if not alive:
            raise BatchAborted(done.task.id, Errors.NO_WORKERS_LEFT.format(done.task.id), done.error)
        retried.add(done.task.id)
        pending.appendleft(done.task)

    schedule = TaskSchedule(tuple(entries), policy=Policy.DYNAMIC, failures=tuple(failures))
    logger.info(
        f"Dynamic batch of {len(tasks)} tasks done on {len(alive)} workers, "
        f"makespan {schedule.makespan:.3f}."
    )
    return results, schedule


def run_policy(
    policy: str,
    tasks: Sequence[Task],
    workers: Sequence[WorkerHandle],
    engine: Engine,
) -> tuple[Results, TaskSchedule]:
    if policy == Policy.STATIC:
        return run_static(tasks, workers, engine)
    if policy == Policy.DYNAMIC:
        return run_dynamic(tasks, workers, engine)
    raise ConfigError(f"policy `{policy}` can't be run online, use one of {Policy.RUNNABLE}")
