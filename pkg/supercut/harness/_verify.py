"""Differential checks of the solvers and the supergraph machinery on random instances."""
from __future__ import annotations

import dataclasses
import itertools
import logging
from collections.abc import Sequence
from typing import Callable, Optional

import numpy as np

from supercut.graphs import GridGraph, cut_cost, maxflow_pushrelabel, maxflow_reference
from supercut.harness._random import random_grid, random_problem
from supercut.netproto import WireRequest, call_remote
from supercut.parametric import LambdaSchedule, check_nested, solve_schedule_sequential
from supercut.supergraphs import apply_swap, join, solve_supergraph, split
from supercut.utils.exceptions import ConfigError, SupercutError

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class Sweep:
    """The outcome of one check over many random cases."""

    name: str
    cases: int = 0
    failures: list[str] = dataclasses.field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} FAILED"
        return f"{self.name}: {self.cases} cases, {status}"

    def fail(self, case: int, reason: str) -> None:
        logger.warning(f"{self.name} case {case}: {reason}")
        self.failures.append(f"case {case}: {reason}")


def brute_force_min_cut(graph: GridGraph) -> int:
    """The minimum cut cost over all `2 ** (width * height)` labelings."""
    return min(cut_cost(graph, labels) for labels in itertools.product((0, 1), repeat=graph.size))


def oracle_sweep(rng: np.random.Generator, cases: int = 500) -> Sweep:
    sweep = Sweep("oracle")
    for case in range(cases):
        graph = random_grid(rng)
        ours, reference = maxflow_pushrelabel(graph), maxflow_reference(graph)
        if ours.flow != reference.flow:
            sweep.fail(case, f"flow {ours.flow}, the oracle says {reference.flow}")
        elif not np.array_equal(ours.labels, reference.labels):
            sweep.fail(case, "the canonical labels differ from the oracle's")
        sweep.cases += 1
    return sweep


def brute_force_sweep(rng: np.random.Generator, cases: int = 100) -> Sweep:
    sweep = Sweep("brute force")
    for case in range(cases):
        graph = random_grid(rng, max_width=3, max_height=3)
        flow, best = maxflow_pushrelabel(graph).flow, brute_force_min_cut(graph)
        if flow != best:
            sweep.fail(case, f"flow {flow}, the cheapest cut costs {best}")
        sweep.cases += 1
    return sweep


def decomposition_sweep(rng: np.random.Generator, cases: int = 100) -> Sweep:
    sweep = Sweep("decomposition")
    for case in range(cases):
        height = int(rng.integers(1, 6, endpoint=True))
        graphs = [random_grid(rng, height=height) for __ in range(int(rng.integers(1, 5, endpoint=True)))]
        swapped = [bool(flag) for flag in rng.random(len(graphs)) < 0.5]
        composite_graph, layout = join(
            [apply_swap(graph) if flag else graph for graph, flag in zip(graphs, swapped)], swapped=swapped
        )
        composite = solve_supergraph(composite_graph, layout)
        separate = [maxflow_pushrelabel(graph) for graph in graphs]
        if composite.flow != sum(cut.flow for cut in separate):
            sweep.fail(case, f"composite flow {composite.flow} != {sum(cut.flow for cut in separate)}")
        else:
            parts = split(layout, composite, composite_graph)
            for index, (part, expected) in enumerate(zip(parts, separate)):
                if part != expected:
                    sweep.fail(case, f"constituent {index} decodes to {part!r}, expected {expected!r}")
                    break
        sweep.cases += 1
    return sweep


def swap_sweep(rng: np.random.Generator, cases: int = 200) -> Sweep:
    sweep = Sweep("swap")
    for case in range(cases):
        graph = random_grid(rng)
        swapped = apply_swap(graph)
        if maxflow_pushrelabel(swapped).flow != maxflow_pushrelabel(graph).flow:
            sweep.fail(case, "swapping changed the flow")
        elif apply_swap(swapped) != graph:
            sweep.fail(case, "swapping twice is not the identity")
        sweep.cases += 1
    return sweep


def nestedness_sweep(
    rng: np.random.Generator, cases: int = 100, schedule: Optional[LambdaSchedule] = None
) -> Sweep:
    schedule = schedule or LambdaSchedule.default()
    sweep = Sweep("nestedness")
    for case in range(cases):
        check = check_nested(solve_schedule_sequential(random_problem(rng), schedule))
        if not check:
            sweep.fail(case, f"foregrounds shrink at lambda {schedule[check.violation or 0]}")
        sweep.cases += 1
    return sweep


def remote_sweep(rng: np.random.Generator, endpoints: Sequence[str], cases: int = 20) -> Sweep:
    """Solve random supergraphs on every worker and compare them with local solves."""
    sweep = Sweep("remote")
    for case in range(cases):
        height = int(rng.integers(1, 6, endpoint=True))
        graphs = [random_grid(rng, height=height) for __ in range(int(rng.integers(1, 4, endpoint=True)))]
        graph, layout = join(graphs)
        expected = solve_supergraph(graph, layout)
        for endpoint in endpoints:
            try:
                answer = call_remote(endpoint, WireRequest(case, graph, layout))
            except SupercutError as exc:
                sweep.fail(case, f"{endpoint}: {exc}")
                continue
            if answer != expected:
                sweep.fail(case, f"{endpoint} answered {answer!r}, expected {expected!r}")
        sweep.cases += 1
    return sweep


SWEEPS: dict[str, Callable[..., Sweep]] = {
    "oracle": oracle_sweep,
    "brute_force": brute_force_sweep,
    "decomposition": decomposition_sweep,
    "swap": swap_sweep,
    "nestedness": nestedness_sweep,
}


def verify(
    seed: int,
    *,
    endpoints: Sequence[str] = (),
    only: Sequence[str] = (),
    cases: Optional[int] = None,
) -> list[Sweep]:
    """
    Run the selected sweeps (all by default), each on its own stream of `seed`.

    `cases` overrides the number of cases of every sweep.
    """
    names = list(only) or list(SWEEPS)
    unknown = set(names) - set(SWEEPS)
    if unknown:
        raise ConfigError(f"unknown checks {sorted(unknown)}, use any of {sorted(SWEEPS)}")
    counts = {} if cases is None else {"cases": cases}
    sweeps = []
    for index, name in enumerate(SWEEPS):
        if name in names:
            sweeps.append(SWEEPS[name](np.random.default_rng([seed, index]), **counts))
            logger.info(str(sweeps[-1]))
    if endpoints:
        sweeps.append(remote_sweep(np.random.default_rng([seed, len(SWEEPS)]), endpoints, **counts))
        logger.info(str(sweeps[-1]))
    return sweeps
