from __future__ import annotations

import threading

import numpy as np
import pytest

from supercut.scheduling import (
    SimulatedEngine,
    Task,
    TaskSchedule,
    ThreadedEngine,
    WorkerHandle,
    brute_force_makespan,
    run_dynamic,
    run_policy,
    run_static,
)
from supercut.scheduling._types import ScheduledTask
from supercut.utils.constants import Policy, WorkerKind
from supercut.utils.exceptions import BatchAborted, ConfigError


def tasks_of(*durations: float) -> list[Task]:
    return [Task(id=index, duration=duration) for index, duration in enumerate(durations)]


def workers_of(count: int, slots: int = 1) -> list[WorkerHandle]:
    return [WorkerHandle(id=index, slots=slots) for index in range(count)]


def test_static_and_dynamic_makespans() -> None:
    tasks, workers = tasks_of(3, 1, 3, 1), workers_of(2)

    __, static = run_static(tasks, workers, SimulatedEngine())
    assert static.makespan == 6
    assert {worker: [e.task_id for e in entries] for worker, entries in static.by_worker().items()} == {
        0: [0, 2],
        1: [1, 3],
    }

    __, dynamic = run_dynamic(tasks, workers, SimulatedEngine())
    assert dynamic.makespan == 4
    assert [e.task_id for e in dynamic.by_worker()[1]] == [1, 2]
    for schedule in (static, dynamic):
        schedule.validate(range(4), workers)


def test_single_worker() -> None:
    tasks = tasks_of(2, 5, 1)
    for run in (run_static, run_dynamic):
        __, schedule = run(tasks, workers_of(1), SimulatedEngine())
        assert schedule.makespan == 8


def test_empty_batch() -> None:
    results, schedule = run_dynamic([], workers_of(2), SimulatedEngine())
    assert results == {}
    assert schedule.makespan == 0


def test_results_are_matched_by_id() -> None:
    engine = SimulatedEngine(execute=lambda task, worker: task.id * 10)
    results, __ = run_dynamic(tasks_of(4, 1, 2, 3, 1), workers_of(2), engine)
    assert results == {0: 0, 1: 10, 2: 20, 3: 30, 4: 40}


def test_dynamic_within_list_scheduling_bound() -> None:
    rng = np.random.default_rng(0)
    for __ in range(200):
        n = int(rng.integers(1, 3, endpoint=True))
        durations = rng.integers(1, 20, size=int(rng.integers(1, 8, endpoint=True))).tolist()
        __, schedule = run_dynamic(tasks_of(*durations), workers_of(n), SimulatedEngine())
        optimum = brute_force_makespan(durations, n)
        assert optimum <= schedule.makespan <= (2 - 1 / n) * optimum + 1e-9
        schedule.validate(range(len(durations)), workers_of(n))


def test_slots() -> None:
    workers = [WorkerHandle(id=0, slots=2), WorkerHandle(id=1)]
    __, schedule = run_dynamic(tasks_of(2, 2, 2, 2), workers, SimulatedEngine())
    # The first slots of all workers come before the second ones.
    assert [(e.task_id, e.worker_id) for e in sorted(schedule.entries, key=lambda e: e.task_id)] == [
        (0, 0),
        (1, 1),
        (2, 0),
        (3, 0),
    ]
    assert schedule.makespan == 4
    schedule.validate(range(4), workers)
    with pytest.raises(AssertionError):
        schedule.validate(range(4), workers_of(2))


def test_speeds() -> None:
    workers = [WorkerHandle(id=0, speed=2.0), WorkerHandle(id=1)]
    __, schedule = run_static(tasks_of(4, 4), workers, SimulatedEngine())
    assert schedule.loads() == {0: 2.0, 1: 4.0}


def test_dynamic_retries_on_another_worker() -> None:
    engine = SimulatedEngine(failures={(0, 0)})
    results, schedule = run_dynamic(tasks_of(1, 1, 1), workers_of(2), engine)
    assert sorted(results) == [0, 1, 2]
    assert [(e.task_id, e.worker_id) for e in schedule.failures] == [(0, 0)]
    retried = next(e for e in schedule.entries if e.task_id == 0)
    assert (retried.worker_id, retried.attempt) == (1, 2)
    # The failed worker never gets another task.
    assert {e.worker_id for e in schedule.entries} == {1}
    assert schedule.makespan == 3


def test_dynamic_aborts_on_second_failure() -> None:
    engine = SimulatedEngine(failures={(0, 0), (0, 1)})
    with pytest.raises(BatchAborted) as error:
        run_dynamic(tasks_of(1, 1, 1), workers_of(3), engine)
    assert error.value.task_id == 0


def test_dynamic_aborts_without_workers() -> None:
    with pytest.raises(BatchAborted) as error:
        run_dynamic(tasks_of(1, 1), workers_of(1), SimulatedEngine(failures={(0, 0)}))
    assert error.value.task_id == 0
    assert "No workers left" in str(error.value)


def test_static_aborts_without_retry() -> None:
    with pytest.raises(BatchAborted) as error:
        run_static(tasks_of(1, 1, 1), workers_of(2), SimulatedEngine(failures={(2, 0)}))
    assert error.value.task_id == 2
    assert error.value.cause is not None


def test_batch_checks() -> None:
    with pytest.raises(ConfigError):
        run_dynamic(tasks_of(1), [], SimulatedEngine())
    with pytest.raises(ValueError):
        run_static([Task(id=0, duration=1), Task(id=0, duration=1)], workers_of(1), SimulatedEngine())
    with pytest.raises(ValueError):
        run_dynamic(tasks_of(1), [WorkerHandle(id=0), WorkerHandle(id=0)], SimulatedEngine())
    with pytest.raises(ValueError):
        run_dynamic([Task(id=0)], workers_of(1), SimulatedEngine())


def test_run_policy() -> None:
    tasks, workers = tasks_of(3, 1, 3, 1), workers_of(2)
    assert run_policy(Policy.STATIC, tasks, workers, SimulatedEngine())[1].makespan == 6
    assert run_policy(Policy.DYNAMIC, tasks, workers, SimulatedEngine())[1].makespan == 4
    with pytest.raises(ConfigError):
        run_policy(Policy.LPT, tasks, workers, SimulatedEngine())


def test_worker_handle_validation() -> None:
    assert str(WorkerHandle(id=3, kind=WorkerKind.REMOTE, endpoint="host:1")) == "remote#3@host:1"
    with pytest.raises(ConfigError):
        WorkerHandle(id=0, slots=0)
    with pytest.raises(ConfigError):
        WorkerHandle(id=0, kind=WorkerKind.REMOTE)
    with pytest.raises(ConfigError):
        WorkerHandle(id=0, endpoint="host:1")
    with pytest.raises(ConfigError):
        WorkerHandle(id=0, kind="gpu")
    with pytest.raises(ConfigError):
        WorkerHandle(id=0, speed=0)


def test_schedule_validation_catches_missing_tasks() -> None:
    schedule = TaskSchedule((ScheduledTask(0, 0, 0, 1),))
    with pytest.raises(AssertionError):
        schedule.validate([0, 1], workers_of(1))


def test_threaded_engine() -> None:
    seen: set[str] = set()
    lock = threading.Lock()

    def execute(task: Task, worker: WorkerHandle) -> int:
        with lock:
            seen.add(threading.current_thread().name)
        return task.id + worker.id * 100

    workers = workers_of(2)
    with ThreadedEngine(execute, threads=2) as engine:
        results, schedule = run_dynamic(tasks_of(*[0] * 10), workers, engine)
    assert set(results) == set(range(10))
    assert all(results[e.task_id] == e.task_id + e.worker_id * 100 for e in schedule.entries)
    assert all(name.startswith("supercut-task") for name in seen)
    schedule.validate(range(10), workers)


def test_threaded_engine_failure_gets_retried() -> None:
    def execute(task: Task, worker: WorkerHandle) -> int:
        if worker.id == 0:
            raise ConnectionError("worker is gone")
        return task.id

    with ThreadedEngine(execute, threads=2) as engine:
        results, schedule = run_dynamic(tasks_of(*[0] * 4), workers_of(2), engine)
    assert results == {0: 0, 1: 1, 2: 2, 3: 3}
    assert len(schedule.failures) == 1
    assert {e.worker_id for e in schedule.entries} == {1}


def test_threaded_engine_static_overlap() -> None:
    # Both workers must be busy at the same time for the barrier to open.
    barrier = threading.Barrier(2, timeout=10)

    def execute(task: Task, worker: WorkerHandle) -> int:
        barrier.wait()
        return task.id

    with ThreadedEngine(execute, threads=2) as engine:
        results, __ = run_static(tasks_of(0, 0), workers_of(2), engine)
    assert results == {0: 0, 1: 1}
