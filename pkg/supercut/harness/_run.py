from __future__ import annotations

import dataclasses
import logging
import statistics
from collections import defaultdict
from collections.abc import Iterable, Sequence
from types import TracebackType
from typing import Optional

from supercut.graphs import CutResult
from supercut.harness._config import BenchConfig
from supercut.harness._generate import SyntheticImage, generate_image, image_rng, problems_for_image
from supercut.harness._metrics import best_overlap
from supercut.netproto import RemoteWorker, WireRequest
from supercut.parametric import SeedProblem, instantiate
from supercut.scheduling import (
    SimulatedEngine,
    Task,
    ThreadedEngine,
    WorkerHandle,
    lpt_offline,
    run_policy,
    run_static,
    simulate_dynamic,
)
from supercut.supergraphs import (
    apply_swap,
    build_seed_supergraph,
    decide_family_swap,
    join,
    solve_supergraph,
    split,
)
from supercut.types import JsonDict, JsonList
from supercut.utils.constants import Mode, Policy, WorkerKind

logger = logging.getLogger(__name__)

SolutionKey = tuple[int, int, int]
"""(image, problem, lambda index)"""


@dataclasses.dataclass(frozen=True)
class BatchTask:
    """A scheduled task plus the `(problem, lambda index)` each of its segments stands for."""

    task: Task
    members: tuple[tuple[int, int], ...]


def build_tasks(
    config: BenchConfig, problems: Sequence[SeedProblem], *, first_id: int = 0
) -> list[BatchTask]:
    """
    Cut the problems of one image into tasks.

    In supergraph mode every `seeds_per_supergraph` consecutive problems get
    joined with their whole lambda schedule into one task; in batch mode every
    `(problem, lambda)` pair is a task of its own.
    """
    schedule = config.schedule
    tasks = []
    if config.mode == Mode.SUPERGRAPH:
        step = config.seeds_per_supergraph
        for start in range(0, len(problems), step):
            chunk = problems[start : start + step]
            graph, layout = build_seed_supergraph(
                chunk, schedule, use_swap=config.use_swap, pad_heights=config.pad_heights
            )
            members = tuple(
                (start + index // len(schedule), index % len(schedule))
                for index in range(len(chunk) * len(schedule))
            )
            tasks.append(BatchTask(Task(first_id + len(tasks), graph, layout), members))
        return tasks

    for index, problem in enumerate(problems):
        swap = config.use_swap and decide_family_swap(problem, schedule)
        for position, lam in enumerate(schedule):
            graph = instantiate(problem, lam)
            graph, layout = join([apply_swap(graph) if swap else graph], swapped=[swap])
            tasks.append(BatchTask(Task(first_id + len(tasks), graph, layout), ((index, position),)))
    return tasks


class TaskRunner:
    """
    Solves tasks on the worker they were dispatched to.

    Local workers solve in the calling thread, remote ones get the task over a
    persistent connection each.
    """

    def __init__(self, workers: Iterable[WorkerHandle], *, timeout: Optional[float] = None) -> None:
        self.clients = {
            worker.id: RemoteWorker(worker.endpoint, slots=worker.slots, timeout=timeout)
            for worker in workers
            if worker.kind == WorkerKind.REMOTE and worker.endpoint
        }

    def __call__(self, task: Task, worker: WorkerHandle) -> CutResult:
        assert task.graph is not None and task.layout is not None
        if worker.kind == WorkerKind.REMOTE:
            return self.clients[worker.id].call(WireRequest(task.id, task.graph, task.layout))
        return solve_supergraph(task.graph, task.layout)

    def __enter__(self) -> TaskRunner:
        return self

    def __exit__(
        self,
        exc_type: Optional[type[BaseException]],
        exc_value: Optional[BaseException],
        traceback: Optional[TracebackType],
    ) -> None:
        self.close()

    def close(self) -> None:
        for client in self.clients.values():
            client.close()


def replay_makespans(durations: Sequence[float], slots: int) -> dict[str, float]:
    """Makespans the measured durations would have under each policy on `slots` identical machines."""
    machines = [WorkerHandle(id=index) for index in range(slots)]
    tasks = [Task(id=index, duration=duration) for index, duration in enumerate(durations)]
    __, static = run_static(tasks, machines, SimulatedEngine())
    return {
        Policy.STATIC: static.makespan,
        Policy.DYNAMIC: simulate_dynamic(durations, machines).makespan,
        Policy.LPT: lpt_offline(durations, slots).makespan,
    }


@dataclasses.dataclass
class RunReport:
    """
    The outcome of a benchmark run.

    `records` are the raw per-task records (plus per-problem overlap records when
    they were computed), everything else gets derived from them. `solutions` holds
    the cuts of the run itself and is not part of the exported report.
    """

    label: str
    policy: str
    mode: str
    images: int
    records: JsonList = dataclasses.field(default_factory=list)
    solutions: dict[SolutionKey, CutResult] = dataclasses.field(default_factory=dict)

    def __repr__(self) -> str:
        return f"<RunReport:{self.label},{self.policy},{self.mode},tasks={len(self.task_records)}>"

    @property
    def task_records(self) -> JsonList:
        return [record for record in self.records if record["kind"] == "task"]

    @property
    def overlap_records(self) -> JsonList:
        return [record for record in self.records if record["kind"] == "overlap"]

    def flows(self) -> dict[SolutionKey, int]:
        flows = {}
        for record in self.task_records:
            for (problem, position), flow in zip(record["members"], record["flows"]):
                flows[(record["image"], problem, position)] = flow
        return flows

    def image_times(self) -> dict[int, float]:
        """Wall time from the first dispatch to the last completion, per image."""
        finishes: defaultdict[int, float] = defaultdict(float)
        for record in self.task_records:
            finishes[record["image"]] = max(finishes[record["image"]], record["finish"])
        return dict(finishes)

    def policy_makespans(self) -> dict[str, float]:
        """The measured makespan next to the makespans of every policy replayed on the measured durations."""
        per_image: defaultdict[int, JsonList] = defaultdict(list)
        for record in self.task_records:
            per_image[record["image"]].append(record)
        totals: defaultdict[str, float] = defaultdict(float)
        for records in per_image.values():
            records.sort(key=lambda record: record["task"])
            durations = [record["finish"] - record["start"] for record in records]
            for policy, makespan in replay_makespans(durations, records[0]["slots"]).items():
                totals[policy] += makespan
        totals["measured"] = sum(self.image_times().values())
        return dict(totals)

    def overlaps(self) -> dict[tuple[int, int], float]:
        return {(record["image"], record["problem"]): record["overlap"] for record in self.overlap_records}

    def summary(self) -> Optional[JsonDict]:
        """The Min / Avg / Max row over the per-image times, None for an empty run."""
        times = list(self.image_times().values())
        if not times:
            return None
        return {
            "label": self.label,
            "policy": self.policy,
            "mode": self.mode,
            "images": self.images,
            "tasks": len(self.task_records),
            "min_s": min(times),
            "avg_s": statistics.fmean(times),
            "max_s": max(times),
        }

    @classmethod
    def from_records(cls, records: JsonList, *, label: str, policy: str, mode: str, images: int) -> RunReport:
        return cls(label=label, policy=policy, mode=mode, images=images, records=list(records))


def _task_record(
    image: int,
    batch_task: BatchTask,
    slots: int,
    worker: int,
    start: float,
    finish: float,
    flows: Sequence[int],
) -> JsonDict:
    return {
        "kind": "task",
        "image": image,
        "task": batch_task.task.id,
        "worker": worker,
        "slots": slots,
        "start": start,
        "finish": finish,
        "constituents": len(batch_task.members),
        "members": [list(member) for member in batch_task.members],
        "flows": list(flows),
    }


def run_image(
    config: BenchConfig,
    image_index: int,
    problems: Sequence[SeedProblem],
    runner: TaskRunner,
    report: RunReport,
    *,
    first_id: int = 0,
) -> int:
    """
    Solve all problems of one image and add the records and cuts to `report`.

    Returns:
        The number of tasks that ran.

    Raises:
        BatchAborted: If the scheduler gave up on the batch.
    """
    batch = build_tasks(config, problems, first_id=first_id)
    by_id = {batch_task.task.id: batch_task for batch_task in batch}
    with ThreadedEngine(runner, config.total_slots) as engine:
        results, schedule = run_policy(config.policy, [b.task for b in batch], config.workers, engine)

    for entry in sorted(schedule.entries, key=lambda e: e.task_id):
        batch_task = by_id[entry.task_id]
        task = batch_task.task
        assert task.graph is not None and task.layout is not None
        cuts = split(task.layout, results[entry.task_id], task.graph)
        for (problem, position), cut in zip(batch_task.members, cuts):
            report.solutions[(image_index, problem, position)] = cut
        report.records.append(
            _task_record(
                image_index,
                batch_task,
                config.total_slots,
                entry.worker_id,
                entry.start,
                entry.finish,
                [cut.flow for cut in cuts],
            )
        )
    logger.info(
        f"Image {image_index}: {len(batch)} tasks on {len(config.workers)} workers"
        f" in {schedule.makespan:.3f} s."
    )
    return len(batch)


def _add_overlaps(
    config: BenchConfig,
    image_index: int,
    image: SyntheticImage,
    problems: Sequence[SeedProblem],
    report: RunReport,
) -> None:
    truth = image.region_masks()
    for problem in range(len(problems)):
        best = max(
            best_overlap(report.solutions[(image_index, problem, position)].labels, truth)
            for position in range(len(config.schedule))
        )
        report.records.append(
            {"kind": "overlap", "image": image_index, "problem": problem, "overlap": float(best)}
        )


def run_benchmark(config: BenchConfig, *, with_overlap: bool = False) -> RunReport:
    """
    Generate every image of `config` and solve all of its problems.

    Args:
        config: What to run, and where.
        with_overlap: Whether to score every problem's best segment along the
            schedule against the ground truth regions of its image.

    Raises:
        BatchAborted: If any image's batch failed, nothing gets reported then.
        SeedGridTooDense: If the seed grid doesn't fit into the images.
    """
    report = RunReport(label=config.label, policy=config.policy, mode=config.mode, images=config.images)
    logger.info(
        f"Running {config.label} ({config.policy}, {config.mode}) on "
        f"{', '.join(str(worker) for worker in config.workers)}."
    )
    next_id = 0
    with TaskRunner(config.workers, timeout=config.rpc_timeout) as runner:
        for image_index in range(config.images):
            image = generate_image(config.image_width, config.image_height, image_rng(config, image_index))
            problems = problems_for_image(config, image)
            next_id += run_image(config, image_index, problems, runner, report, first_id=next_id)
            if with_overlap:
                _add_overlaps(config, image_index, image, problems, report)
    return report
