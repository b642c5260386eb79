from __future__ import annotations

import logging
from collections import deque
from typing import Optional

import numpy as np

from supercut.graphs._grid import CutResult, GridGraph, admit
from supercut.graphs._residual import ResidualState, extract_canonical_cut, neighbor_table
from supercut.types import ColumnMask
from supercut.utils.constants import Direction

logger = logging.getLogger(__name__)

_REVERSE = tuple(int(direction.reverse) for direction in Direction)


class PushRelabel:
    """
    FIFO push-relabel with periodic global relabeling on a `GridGraph`.

    Every choice is deterministic: active pixels are discharged in first in first
    out order, and the arcs of a pixel are scanned as sink, left, right, up, down
    and finally back to the source. A global relabel (exact BFS distances to the
    sink, and to the source for pixels that can't reach the sink anymore) runs at
    the start and after every `width * height` relabels.

    The residual state is kept in flat Python lists indexed by pixel
    (`4 * p + direction` for neighbor arcs), which is considerably faster than
    element-wise numpy access.
    """

    def __init__(self, graph: GridGraph) -> None:
        self.graph = graph
        n = graph.size
        self.n = n
        # Height of the source, the sink sits at 0.
        self.source_height = n + 2
        self.unreachable = 2 * self.source_height
        self.neighbor = neighbor_table(graph.width, graph.height)

        src = graph.src_cap.ravel().tolist()
        snk = graph.snk_cap.ravel().tolist()
        self.residual: list[int] = graph.nbr_cap.reshape(4, n).T.ravel().tolist()
        # Flow on source -> p, which is also the residual of p -> source.
        self.source_flow: list[int] = list(src)
        self.excess: list[int] = list(src)
        self.sink_residual: list[int] = list(snk)
        self.height = [0] * n

        self.pushes = 0
        self.relabels = 0
        self.global_relabels = 0

    def run(self) -> ResidualState:
        excess = self.excess
        sink_residual = self.sink_residual
        # Flow that can go straight to the sink never has to touch the grid.
        for p in range(self.n):
            direct = min(excess[p], sink_residual[p])
            if direct:
                excess[p] -= direct
                sink_residual[p] -= direct

        self.global_relabel()
        active = deque(p for p in range(self.n) if excess[p] > 0)
        since_global = 0
        while active:
            p = active.popleft()
            since_global += self.discharge(p, active)
            if since_global >= self.n:
                self.global_relabel()
                since_global = 0

        logger.debug(
            f"Push-relabel on {self.graph}: {self.pushes} pushes, "
            f"{self.relabels} relabels, {self.global_relabels} global relabels."
        )
        return self.state()

    def discharge(self, p: int, active: deque[int]) -> int:
        """Push all excess out of `p`, return how many times it was relabeled."""
        excess = self.excess
        height = self.height
        residual = self.residual
        neighbor = self.neighbor
        sink_residual = self.sink_residual
        source_flow = self.source_flow
        base = 4 * p
        relabels = 0

        while True:
            hp = height[p]
            if hp == 1 and sink_residual[p] > 0:
                delta = min(excess[p], sink_residual[p])
                sink_residual[p] -= delta
                excess[p] -= delta
                self.pushes += 1
                if not excess[p]:
                    return relabels

            for d in range(4):
                r = residual[base + d]
                if r <= 0:
                    continue
                q = neighbor[base + d]
                if hp != height[q] + 1:
                    continue
                delta = min(excess[p], r)
                residual[base + d] = r - delta
                residual[4 * q + _REVERSE[d]] += delta
                if not excess[q]:
                    active.append(q)
                excess[q] += delta
                excess[p] -= delta
                self.pushes += 1
                if not excess[p]:
                    return relabels

            if hp == self.source_height + 1 and source_flow[p] > 0:
                delta = min(excess[p], source_flow[p])
                source_flow[p] -= delta
                excess[p] -= delta
                self.pushes += 1
                if not excess[p]:
                    return relabels

            self.relabel(p)
            relabels += 1

    def relabel(self, p: int) -> None:
        lowest = self.unreachable
        if self.sink_residual[p] > 0:
            lowest = 0
        base = 4 * p
        for d in range(4):
            if self.residual[base + d] > 0:
                lowest = min(lowest, self.height[self.neighbor[base + d]])
        if self.source_flow[p] > 0:
            lowest = min(lowest, self.source_height)
        self.height[p] = lowest + 1
        self.relabels += 1

    def global_relabel(self) -> None:
        """Set every height to the exact residual distance to the sink (or the source)."""
        height = [self.unreachable] * self.n
        self.height = height
        residual = self.residual
        neighbor = self.neighbor

        def spread(queue: deque[int]) -> None:
            while queue:
                q = queue.popleft()
                hq = height[q]
                base = 4 * q
                for d in range(4):
                    v = neighbor[base + d]
                    # The arc v -> q is the reverse direction of q -> v.
                    if v >= 0 and height[v] == self.unreachable and residual[4 * v + _REVERSE[d]] > 0:
                        height[v] = hq + 1
                        queue.append(v)

        to_sink = deque(p for p in range(self.n) if self.sink_residual[p] > 0)
        for p in to_sink:
            height[p] = 1
        spread(to_sink)

        to_source = deque(
            p for p in range(self.n) if height[p] == self.unreachable and self.source_flow[p] > 0
        )
        for p in to_source:
            height[p] = self.source_height + 1
        spread(to_source)

        self.global_relabels += 1

    def state(self) -> ResidualState:
        graph = self.graph
        plane = (graph.height, graph.width)
        source_flow = np.array(self.source_flow, dtype=np.int64).reshape(plane)
        return ResidualState(
            src_residual=graph.src_cap - source_flow,
            snk_residual=np.array(self.sink_residual, dtype=np.int64).reshape(plane),
            nbr_residual=np.array(self.residual, dtype=np.int64).reshape(graph.size, 4).T.reshape(4, *plane),
            excess=np.array(self.excess, dtype=np.int64).reshape(plane),
        )


def maxflow_pushrelabel(
    graph: GridGraph,
    *,
    maximal_columns: Optional[ColumnMask] = None,
) -> CutResult:
    """
    Solve the max-flow / min-cut problem of `graph` with push-relabel.

    Args:
        graph: The graph to solve, it gets admitted first.
        maximal_columns: Columns in which the maximal instead of the minimal
            source side cut gets reported, see `extract_canonical_cut`.

    Returns:
        The max-flow value and the canonical min cut.

    Examples:
        >>> g = GridGraph.from_edges(2, 1, [5, 0], [0, 3], {(0, 1): 2, (1, 0): 2})
        >>> result = maxflow_pushrelabel(g)
        >>> result.flow, result.labels.ravel().tolist()
        (2, [1, 0])
    """
    # Composite supergraphs may exceed the CAP_MAX bound, their constituents can't.
    admit(graph, bounded_by_cap_max=False)
    state = PushRelabel(graph).run()
    labels = extract_canonical_cut(graph, state, maximal_columns=maximal_columns)
    return CutResult(flow=state.flow_value(graph), labels=labels)
