from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supercut.graphs import CutResult, GridGraph, cut_cost, maxflow_pushrelabel, maxflow_reference
from supercut.harness import random_grid, random_problem
from supercut.parametric import LambdaSchedule, SeedProblem, instantiate, solve_schedule_sequential
from supercut.supergraphs import (
    SupergraphLayout,
    apply_swap,
    build_lambda_supergraph,
    build_seed_supergraph,
    decide_family_swap,
    join,
    solve_supergraph,
    split,
    swap_decision,
    swap_diagnostics,
)
from supercut.tests.helpers import CORNERS, TWO_PIXELS
from supercut.utils.constants import Direction
from supercut.utils.exceptions import (
    ContractViolation,
    DimensionMismatch,
    EmptySupergraph,
    HeightMismatch,
    InvalidLayout,
    ShapeMismatch,
)

SCHEDULE = LambdaSchedule((1, 4, 16, 64))


def solve_and_split(graphs: list[GridGraph], swapped: list[bool]) -> list[CutResult]:
    composite, layout = join(graphs, swapped=swapped)
    return split(layout, solve_supergraph(composite, layout), composite)


def test_join_single_graph() -> None:
    composite, layout = join([TWO_PIXELS])
    assert composite == TWO_PIXELS
    assert layout.bridge_columns == ()
    assert split(layout, maxflow_pushrelabel(composite), composite) == [maxflow_pushrelabel(TWO_PIXELS)]


def test_join_two_single_pixels() -> None:
    a = GridGraph.from_edges(1, 1, [4], [1])
    b = GridGraph.from_edges(1, 1, [2], [7])
    composite, layout = join([a, b])
    assert composite.width == 3
    cut = maxflow_pushrelabel(composite)
    assert cut.flow == 3
    assert [result.flow for result in split(layout, cut, composite)] == [1, 2]


def test_bridge_columns_are_empty() -> None:
    composite, layout = join([CORNERS, TWO_PIXELS.crop(0, 2), CORNERS], pad_heights=True)
    assert layout.bridge_columns == (2, 5)
    for column in layout.bridge_columns:
        assert not composite.src_cap[:, column].any()
        assert not composite.snk_cap[:, column].any()
        assert not composite.nbr_cap[:, :, column].any()
        # Nothing reaches into a bridge from the neighboring columns either.
        assert not composite.nbr_cap[Direction.RIGHT, :, column - 1].any()
        assert not composite.nbr_cap[Direction.LEFT, :, column + 1].any()


def test_decomposition_identity() -> None:
    rng = np.random.default_rng(0)
    for __ in range(100):
        k = int(rng.integers(1, 5, endpoint=True))
        height = int(rng.integers(1, 4, endpoint=True))
        graphs = [random_grid(rng, max_width=4, height=height) for __ in range(k)]
        composite, layout = join(graphs)
        assert layout.width == sum(g.width for g in graphs) + k - 1
        cut = maxflow_pushrelabel(composite)
        assert cut.flow == sum(maxflow_reference(g).flow for g in graphs)
        assert split(layout, cut, composite) == [maxflow_reference(g) for g in graphs]


def test_decomposition_with_swapped_segments() -> None:
    rng = np.random.default_rng(1)
    for __ in range(100):
        k = int(rng.integers(1, 5, endpoint=True))
        graphs = [random_grid(rng, max_width=4, height=3) for __ in range(k)]
        flags = [bool(flag) for flag in rng.random(k) < 0.5]
        prepared = [apply_swap(g) if flag else g for g, flag in zip(graphs, flags)]
        results = solve_and_split(prepared, flags)
        # Swapped segments decode to the minimal source side cut of the original too.
        assert results == [maxflow_reference(g) for g in graphs]


def test_join_errors() -> None:
    with pytest.raises(EmptySupergraph):
        join([])
    with pytest.raises(HeightMismatch):
        join([TWO_PIXELS, CORNERS])


def test_pad_heights() -> None:
    composite, layout = join([TWO_PIXELS, CORNERS], pad_heights=True)
    assert (composite.height, composite.width) == (2, 5)
    assert layout.segments[0].height == 1
    results = split(layout, maxflow_pushrelabel(composite), composite)
    assert results == [maxflow_pushrelabel(TWO_PIXELS), maxflow_pushrelabel(CORNERS)]
    assert results[0].labels.shape == (1, 2)


def test_split_errors() -> None:
    composite, layout = join([TWO_PIXELS, TWO_PIXELS])
    cut = maxflow_pushrelabel(composite)
    with pytest.raises(ShapeMismatch):
        split(layout, maxflow_pushrelabel(TWO_PIXELS), composite)
    with pytest.raises(ShapeMismatch):
        split(layout, cut, TWO_PIXELS)
    wrong = type(cut)(flow=cut.flow + 1, labels=cut.labels)
    with pytest.raises(ContractViolation):
        split(layout, wrong, composite)


def test_swapped_segment_labels_are_complemented() -> None:
    composite, layout = join([TWO_PIXELS], swapped=[True])
    cut = maxflow_pushrelabel(composite)
    (result,) = split(layout, cut, composite)
    assert np.array_equal(result.labels, 1 - cut.labels)


def test_layout_validation() -> None:
    layout = SupergraphLayout.build([(2, 1), (3, 1)], swapped=[False, True])
    assert layout.width == 6
    assert layout.swapped == (False, True)
    assert layout.swapped_columns().tolist() == [False, False, False, True, True, True]
    with pytest.raises(EmptySupergraph):
        SupergraphLayout.build([])
    with pytest.raises(InvalidLayout):
        SupergraphLayout(segments=layout.segments, bridge_columns=(3,), height=1)


def test_swap_decision() -> None:
    assert not swap_decision(GridGraph.from_edges(2, 1, [5, 0], [0, 3]))
    assert swap_decision(GridGraph.from_edges(3, 1, [0, 0, 4], [2, 3, 0]))
    assert not swap_decision(GridGraph.zeros(3, 3))


def test_swap_diagnostics() -> None:
    diagnostics = swap_diagnostics(GridGraph.from_edges(3, 1, [0, 0, 4], [2, 3, 0]))
    assert (diagnostics.positive_count, diagnostics.negative_count) == (1, 2)
    assert (diagnostics.positive_sum, diagnostics.negative_sum) == (4, 5)
    assert diagnostics.swap


def test_apply_swap() -> None:
    swapped = apply_swap(TWO_PIXELS)
    assert swapped.src_cap.tolist() == [[0, 3]]
    assert swapped.snk_cap.tolist() == [[5, 0]]
    assert maxflow_pushrelabel(swapped).flow == 2
    assert apply_swap(swapped) == TWO_PIXELS


def test_apply_swap_reverses_edges() -> None:
    graph = GridGraph.from_edges(2, 2, [1, 0, 0, 0], [0, 0, 0, 1], {(0, 1): 3, (1, 3): 5})
    swapped = apply_swap(graph)
    assert swapped == GridGraph.from_edges(2, 2, [0, 0, 0, 1], [1, 0, 0, 0], {(1, 0): 3, (3, 1): 5})


def test_apply_swap_fixed_point() -> None:
    graph = GridGraph.from_edges(2, 1, [3, 3], [3, 3], {(0, 1): 1, (1, 0): 1})
    assert apply_swap(graph) == graph


def test_swap_keeps_the_flow() -> None:
    rng = np.random.default_rng(2)
    for __ in range(200):
        graph = random_grid(rng, max_width=5, max_height=5)
        swapped = apply_swap(graph)
        assert maxflow_pushrelabel(swapped).flow == maxflow_pushrelabel(graph).flow
        # The complement of a cut in the swapped graph costs the same in the original.
        labels = maxflow_pushrelabel(swapped).labels
        assert cut_cost(graph, 1 - labels) == cut_cost(swapped, labels)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_apply_swap_is_an_involution(seed: int) -> None:
    graph = random_grid(np.random.default_rng(seed), max_width=6, max_height=6)
    assert apply_swap(apply_swap(graph)) == graph


def test_build_lambda_supergraph() -> None:
    problem = random_problem(np.random.default_rng(3), 4, 3)
    schedule = LambdaSchedule.default()
    composite, layout = build_lambda_supergraph(problem, schedule, swap=False)
    assert composite.width == 20 * 4 + 19
    assert layout.swapped == (False,) * 20

    single, __ = build_lambda_supergraph(problem, LambdaSchedule((8,)), swap=True)
    assert single == apply_swap(instantiate(problem, 8))

    sequential = solve_schedule_sequential(problem, schedule)
    for swap in (False, True):
        composite, layout = build_lambda_supergraph(problem, schedule, swap=swap)
        results = split(layout, solve_supergraph(composite, layout), composite)
        assert tuple(results) == sequential.cuts


def test_build_seed_supergraph() -> None:
    rng = np.random.default_rng(4)
    problems = [random_problem(rng, 4, 4) for __ in range(3)]
    composite, layout = build_seed_supergraph(problems, SCHEDULE)
    assert len(layout) == 3 * len(SCHEDULE)
    expected_flags = [decide_family_swap(p, SCHEDULE) for p in problems for __ in SCHEDULE]
    assert list(layout.swapped) == expected_flags

    results = split(layout, solve_supergraph(composite, layout), composite)
    for index, problem in enumerate(problems):
        chunk = results[index * len(SCHEDULE) : (index + 1) * len(SCHEDULE)]
        assert tuple(chunk) == solve_schedule_sequential(problem, SCHEDULE).cuts


def test_build_seed_supergraph_single_problem() -> None:
    problem = random_problem(np.random.default_rng(5), 4, 4)
    swap = decide_family_swap(problem, SCHEDULE)
    assert build_seed_supergraph([problem], SCHEDULE) == build_lambda_supergraph(problem, SCHEDULE, swap)


def uniform_problem(unary_base: int, sink_base: int) -> SeedProblem:
    pairwise = np.zeros((4, 4, 4), dtype=np.int64)
    pairwise[Direction.RIGHT, :, :-1] = 2
    pairwise[Direction.LEFT, :, 1:] = 2
    return SeedProblem(
        width=4,
        height=4,
        unary_base=np.full((4, 4), unary_base),
        unary_slope=np.ones((4, 4)),
        sink_base=np.full((4, 4), sink_base),
        pairwise=pairwise,
        fg_seeds=frozenset({5}),
        bg_seeds=frozenset({0}),
    )


def test_build_seed_supergraph_mixed_swaps() -> None:
    sink_heavy = uniform_problem(0, 100)
    source_heavy = uniform_problem(50, 0)
    assert decide_family_swap(sink_heavy, SCHEDULE)
    assert not decide_family_swap(source_heavy, SCHEDULE)

    composite, layout = build_seed_supergraph([sink_heavy, source_heavy], SCHEDULE)
    assert layout.swapped == (True,) * 4 + (False,) * 4
    results = split(layout, solve_supergraph(composite, layout), composite)
    expected = [solve_schedule_sequential(p, SCHEDULE).cuts for p in (sink_heavy, source_heavy)]
    assert tuple(results) == expected[0] + expected[1]

    __, unswapped = build_seed_supergraph([sink_heavy, source_heavy], SCHEDULE, use_swap=False)
    assert not any(unswapped.swapped)


def test_build_seed_supergraph_errors() -> None:
    rng = np.random.default_rng(7)
    with pytest.raises(EmptySupergraph):
        build_seed_supergraph([], SCHEDULE)
    with pytest.raises(DimensionMismatch):
        build_seed_supergraph([random_problem(rng, 4, 4), random_problem(rng, 3, 4)], SCHEDULE)
