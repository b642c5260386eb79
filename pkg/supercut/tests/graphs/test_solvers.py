from __future__ import annotations

from typing import Callable

import numpy as np
import pytest

from supercut.graphs import (
    CutResult,
    GridGraph,
    PushRelabel,
    cut_cost,
    extract_canonical_cut,
    maxflow_pushrelabel,
    maxflow_reference,
)
from supercut.harness import brute_force_min_cut, random_grid
from supercut.tests.helpers import CORNERS, TWO_PIXELS
from supercut.utils.constants import CAP_MAX
from supercut.utils.exceptions import ContractViolation, ShapeMismatch

Solver = Callable[..., CutResult]

SOLVERS = [maxflow_pushrelabel, maxflow_reference]


@pytest.mark.parametrize("solver", SOLVERS)
def test_single_pixel_without_capacity(solver: Solver) -> None:
    result = solver(GridGraph.zeros(1, 1))
    assert result.flow == 0
    assert result.labels.tolist() == [[0]]


@pytest.mark.parametrize("solver", SOLVERS)
def test_two_pixels(solver: Solver) -> None:
    result = solver(TWO_PIXELS)
    assert result.flow == 2
    assert result.labels.tolist() == [[1, 0]]


@pytest.mark.parametrize("solver", SOLVERS)
def test_corners(solver: Solver) -> None:
    result = solver(CORNERS)
    assert result.flow == 2
    assert result.labels.ravel().tolist() == [1, 0, 0, 0]
    assert brute_force_min_cut(CORNERS) == 2


@pytest.mark.parametrize("solver", SOLVERS)
def test_all_zero(solver: Solver) -> None:
    result = solver(GridGraph.zeros(4, 3))
    assert result.flow == 0
    assert not result.labels.any()


@pytest.mark.parametrize("solver", SOLVERS)
def test_seed_stays_in_foreground(solver: Solver) -> None:
    graph = GridGraph.from_edges(3, 1, [CAP_MAX, 0, 0], [0, 10, 10], {(0, 1): 4, (1, 2): 4})
    result = solver(graph)
    assert result.labels[0, 0] == 1
    assert result.flow == 4


def test_source_and_sink_on_the_same_pixel() -> None:
    graph = GridGraph.from_edges(2, 1, [7, 1], [3, 0], {(0, 1): 5})
    result = maxflow_pushrelabel(graph)
    # The unit into p1 has no way out to the sink.
    assert result.flow == 3
    assert result.flow == maxflow_reference(graph).flow


def test_deterministic() -> None:
    graph = random_grid(np.random.default_rng(7), width=6, height=6)
    assert maxflow_pushrelabel(graph) == maxflow_pushrelabel(graph)


def test_oracle_equivalence() -> None:
    rng = np.random.default_rng(0)
    for __ in range(500):
        graph = random_grid(rng)
        ours, reference = maxflow_pushrelabel(graph), maxflow_reference(graph)
        assert ours.flow == reference.flow
        assert np.array_equal(ours.labels, reference.labels)
        assert cut_cost(graph, ours.labels) == ours.flow
        assert ours.flow <= min(int(graph.src_cap.sum()), int(graph.snk_cap.sum()))


def test_brute_force_equivalence() -> None:
    rng = np.random.default_rng(1)
    for __ in range(100):
        graph = random_grid(rng, max_width=3, max_height=3)
        assert maxflow_pushrelabel(graph).flow == brute_force_min_cut(graph)


def test_maximal_columns() -> None:
    # The empty cut, {p0} and {p0, p1} all cost 2.
    graph = GridGraph.from_edges(2, 1, [2, 0], [0, 2], {(0, 1): 2})
    assert maxflow_pushrelabel(graph).labels.tolist() == [[0, 0]]
    maximal = maxflow_pushrelabel(graph, maximal_columns=np.array([True, True]))
    assert maximal.flow == 2
    assert maximal.labels.tolist() == [[1, 1]]
    assert maxflow_reference(graph, maximal_columns=np.array([True, True])) == maximal


def test_maximal_columns_shape() -> None:
    with pytest.raises(ShapeMismatch):
        maxflow_pushrelabel(TWO_PIXELS, maximal_columns=np.array([True]))


def test_extract_canonical_cut_rejects_non_maximal_flow() -> None:
    solver = PushRelabel(TWO_PIXELS)
    # Nothing has been pushed yet, the sink is still reachable.
    with pytest.raises(ContractViolation):
        extract_canonical_cut(TWO_PIXELS, solver.state())


def test_extract_canonical_cut_rejects_excess() -> None:
    state = PushRelabel(TWO_PIXELS).run()
    excess = np.array(state.excess)
    excess[0, 0] = 1
    broken = type(state)(state.src_residual, state.snk_residual, state.nbr_residual, excess)
    with pytest.raises(ContractViolation):
        extract_canonical_cut(TWO_PIXELS, broken)
