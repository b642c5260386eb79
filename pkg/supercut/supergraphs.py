"""
Knitting graphs into supergraphs, and splitting supergraph cuts back apart.

A supergraph places its constituent graphs side by side, separated by one
bridge column whose pixels have no capacity at all. The constituents can't share
any cut edge, so a single solve of the composite gives every constituent's min
cut at once.
"""
from __future__ import annotations

import dataclasses
import logging
from collections.abc import Sequence
from typing import Callable, Optional

import numpy as np

from supercut.graphs import CutResult, GridGraph, admit, cut_cost, maxflow_pushrelabel
from supercut.parametric import LambdaSchedule, SeedProblem, instantiate
from supercut.types import ColumnMask
from supercut.utils.constants import Direction
from supercut.utils.exceptions import (
    ContractViolation,
    DimensionMismatch,
    EmptySupergraph,
    HeightMismatch,
    InvalidLayout,
    ShapeMismatch,
)

logger = logging.getLogger(__name__)

ColumnSolver = Callable[..., CutResult]


@dataclasses.dataclass(frozen=True)
class Segment:
    """
    The placement of one constituent inside a supergraph.

    Attributes:
        constituent: Id of the constituent, e.g. its index in the batch.
        offset: First composite column of the constituent.
        width: Columns of the constituent.
        height: Rows of the constituent, the rows below it are padding.
        swapped: Whether the constituent was s-t swapped before joining.
    """

    constituent: int
    offset: int
    width: int
    height: int
    swapped: bool = False


@dataclasses.dataclass(frozen=True)
class SupergraphLayout:
    """
    Everything needed to invert a `join`.

    Examples:
        >>> layout = SupergraphLayout.build([(3, 2), (3, 2)])
        >>> layout.width, layout.bridge_columns
        (7, (3,))
    """

    segments: tuple[Segment, ...]
    bridge_columns: tuple[int, ...]
    height: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "bridge_columns", tuple(self.bridge_columns))
        if not self.segments:
            raise EmptySupergraph()
        offset = 0
        for index, segment in enumerate(self.segments):
            if segment.offset != offset:
                raise InvalidLayout(f"segment {index} starts at column {segment.offset}, expected {offset}")
            if segment.width < 1 or not 1 <= segment.height <= self.height:
                raise InvalidLayout(f"segment {index} is {segment.width}x{segment.height}")
            offset += segment.width + 1
        expected = tuple(segment.offset + segment.width for segment in self.segments[:-1])
        if self.bridge_columns != expected:
            raise InvalidLayout(f"bridge columns {self.bridge_columns}, expected {expected}")

    def __len__(self) -> int:
        return len(self.segments)

    @classmethod
    def build(
        cls,
        sizes: Sequence[tuple[int, int]],
        swapped: Optional[Sequence[bool]] = None,
        constituents: Optional[Sequence[int]] = None,
    ) -> SupergraphLayout:
        """Lay out constituents of the given `(width, height)` sizes from left to right."""
        flags = list(swapped) if swapped is not None else [False] * len(sizes)
        ids = list(constituents) if constituents is not None else list(range(len(sizes)))
        segments = []
        offset = 0
        for (width, height), flag, constituent in zip(sizes, flags, ids):
            segments.append(Segment(constituent, offset, width, height, flag))
            offset += width + 1
        return cls(
            segments=tuple(segments),
            bridge_columns=tuple(s.offset + s.width for s in segments[:-1]),
            height=max((height for __, height in sizes), default=0),
        )

    @property
    def width(self) -> int:
        last = self.segments[-1]
        return last.offset + last.width

    @property
    def swapped(self) -> tuple[bool, ...]:
        return tuple(segment.swapped for segment in self.segments)

    def swapped_columns(self) -> ColumnMask:
        """Per composite column, whether it belongs to a swapped segment."""
        columns = np.zeros(self.width, dtype=bool)
        for segment in self.segments:
            if segment.swapped:
                columns[segment.offset : segment.offset + segment.width] = True
        return columns


def join(
    graphs: Sequence[GridGraph],
    *,
    swapped: Optional[Sequence[bool]] = None,
    constituents: Optional[Sequence[int]] = None,
    pad_heights: bool = False,
) -> tuple[GridGraph, SupergraphLayout]:
    """
    Knit graphs into one composite graph.

    Args:
        graphs: The constituents, each gets admitted on its own.
        swapped: Which of the constituents have already been s-t swapped, only
            recorded in the layout.
        constituents: Ids of the constituents, defaults to their indices.
        pad_heights: Whether shorter graphs get padded with zero capacity rows.

    Raises:
        EmptySupergraph: If there are no graphs.
        HeightMismatch: If the heights differ and padding is disabled.

    Examples:
        >>> a = GridGraph.from_edges(1, 1, [4], [1])
        >>> b = GridGraph.from_edges(1, 1, [2], [7])
        >>> composite, layout = join([a, b])
        >>> composite.src_cap.tolist(), layout.bridge_columns
        ([[4, 0, 2]], (1,))
    """
    if not graphs:
        raise EmptySupergraph()
    for graph in graphs:
        admit(graph)
        if graph.height != graphs[0].height and not pad_heights:
            raise HeightMismatch(graphs[0].height, graph.height)

    layout = SupergraphLayout.build([(g.width, g.height) for g in graphs], swapped, constituents)
    src = np.zeros((layout.height, layout.width), dtype=np.int64)
    snk = np.zeros_like(src)
    nbr = np.zeros((4, layout.height, layout.width), dtype=np.int64)
    for graph, segment in zip(graphs, layout.segments):
        window = np.s_[: segment.height, segment.offset : segment.offset + segment.width]
        src[window] = graph.src_cap
        snk[window] = graph.snk_cap
        # Constituents have zero border edges, so nothing links them to the bridges.
        nbr[(slice(None), *window)] = graph.nbr_cap

    composite = GridGraph(layout.width, layout.height, src, snk, nbr)
    admit(composite, bounded_by_cap_max=False)
    return composite, layout


def split(layout: SupergraphLayout, composite: CutResult, graph: GridGraph) -> list[CutResult]:
    """
    Decode a composite cut into one cut per constituent.

    The flow of each constituent is the cut cost of its window, these have to add
    up to the composite flow. Labels of swapped segments get complemented, bridge
    columns and padding rows are dropped.

    Raises:
        ShapeMismatch: If the cut or the graph don't match the layout.
        ContractViolation: If the segment flows don't add up to the composite flow.
    """
    shape = (layout.height, layout.width)
    if composite.labels.shape != shape:
        raise ShapeMismatch(shape, "labels", composite.labels.shape)
    if (graph.height, graph.width) != shape:
        raise ShapeMismatch(shape, "graph", (graph.height, graph.width))

    results = []
    for segment in layout.segments:
        labels = composite.labels[: segment.height, segment.offset : segment.offset + segment.width]
        flow = cut_cost(graph.crop(segment.offset, segment.width, segment.height), labels)
        if segment.swapped:
            labels = 1 - labels
        results.append(CutResult(flow=flow, labels=labels))

    total = sum(result.flow for result in results)
    if total != composite.flow:
        raise ContractViolation(f"segment flows sum up to {total}, the composite flow is {composite.flow}")
    return results


def solve_supergraph(
    graph: GridGraph,
    layout: SupergraphLayout,
    *,
    solver: ColumnSolver = maxflow_pushrelabel,
) -> CutResult:
    """
    Solve a composite graph.

    Swapped segments are cut on the maximal source side, so that their
    complement is the minimal source side cut of the original constituent.
    """
    return solver(graph, maximal_columns=layout.swapped_columns())


@dataclasses.dataclass(frozen=True)
class SwapDiagnostics:
    """Counts and summed magnitudes of the terminal differences `src_cap - snk_cap`."""

    positive_count: int
    negative_count: int
    positive_sum: int
    negative_sum: int

    @property
    def swap(self) -> bool:
        return self.negative_count > self.positive_count


def swap_diagnostics(graph: GridGraph) -> SwapDiagnostics:
    difference = graph.src_cap - graph.snk_cap
    return SwapDiagnostics(
        positive_count=int((difference > 0).sum()),
        negative_count=int((difference < 0).sum()),
        positive_sum=int(difference[difference > 0].sum()),
        negative_sum=int(-difference[difference < 0].sum()),
    )


def swap_decision(graph: GridGraph) -> bool:
    """
    Return whether the graph should be s-t swapped.

    True when strictly more pixels lean to the sink than to the source.

    Examples:
        >>> swap_decision(GridGraph.from_edges(3, 1, [0, 0, 4], [2, 3, 0]))
        True
        >>> swap_decision(GridGraph.from_edges(2, 1, [5, 0], [0, 3]))
        False
    """
    return swap_diagnostics(graph).swap


def apply_swap(graph: GridGraph) -> GridGraph:
    """
    Exchange the roles of the source and the sink.

    Terminal capacities trade places and every neighbor edge gets reversed. The
    max-flow value stays the same, and the swap is its own inverse.
    """
    old = graph.nbr_cap
    nbr = np.zeros_like(old)
    # The new edge p -> q carries the capacity of the old edge q -> p.
    nbr[Direction.RIGHT, :, :-1] = old[Direction.LEFT, :, 1:]
    nbr[Direction.LEFT, :, 1:] = old[Direction.RIGHT, :, :-1]
    nbr[Direction.DOWN, :-1, :] = old[Direction.UP, 1:, :]
    nbr[Direction.UP, 1:, :] = old[Direction.DOWN, :-1, :]
    return GridGraph(
        width=graph.width,
        height=graph.height,
        src_cap=graph.snk_cap,
        snk_cap=graph.src_cap,
        nbr_cap=nbr,
    )


def decide_family_swap(problem: SeedProblem, schedule: LambdaSchedule) -> bool:
    """Take a single swap decision for the whole family, on its mid-schedule instantiation."""
    return swap_decision(instantiate(problem, schedule.representative))


def build_lambda_supergraph(
    problem: SeedProblem,
    schedule: LambdaSchedule,
    swap: bool,
    *,
    first_constituent: int = 0,
) -> tuple[GridGraph, SupergraphLayout]:
    graphs = [instantiate(problem, lam) for lam in schedule]
    if swap:
        graphs = [apply_swap(graph) for graph in graphs]
    return join(
        graphs,
        swapped=[swap] * len(graphs),
        constituents=range(first_constituent, first_constituent + len(graphs)),
    )


def build_seed_supergraph(
    problems: Sequence[SeedProblem],
    schedule: LambdaSchedule,
    *,
    use_swap: bool = True,
    pad_heights: bool = False,
) -> tuple[GridGraph, SupergraphLayout]:
    """
    Join the lambda supergraphs of several problems into one.

    Every problem gets its own swap decision. Constituent `i * len(schedule) + j`
    is problem `i` at `schedule[j]`.

    Raises:
        EmptySupergraph: If there are no problems.
        DimensionMismatch: If the problems don't share their dimensions.
    """
    if not problems:
        raise EmptySupergraph()
    first = problems[0]
    graphs: list[GridGraph] = []
    swapped: list[bool] = []
    for problem in problems:
        if (problem.width, problem.height) != (first.width, first.height):
            raise DimensionMismatch(
                f"{first.width}x{first.height}", f"{problem.width}x{problem.height}"
            )
        swap = use_swap and decide_family_swap(problem, schedule)
        for lam in schedule:
            graph = instantiate(problem, lam)
            graphs.append(apply_swap(graph) if swap else graph)
            swapped.append(swap)

    logger.debug(
        f"Seed supergraph of {len(problems)} problems x {len(schedule)} lambdas, "
        f"{sum(swapped)} constituents swapped."
    )
    return join(graphs, swapped=swapped, pad_heights=pad_heights)
