from __future__ import annotations

import dataclasses
import functools
from collections import deque
from typing import Optional

import numpy as np

from supercut.graphs._grid import GridGraph
from supercut.types import CapacityArray, ColumnMask, Mask
from supercut.utils.constants import Direction
from supercut.utils.exceptions import ContractViolation, ShapeMismatch

_REVERSE = tuple(int(direction.reverse) for direction in Direction)


@functools.lru_cache(maxsize=64)
def neighbor_table(width: int, height: int) -> tuple[int, ...]:
    """
    Return the flat neighbor table of a grid.

    Entry `4 * p + d` is the index of the neighbor of pixel `p` in direction `d`,
    or -1 when that neighbor would be outside of the grid.
    """
    table = []
    for p in range(width * height):
        y, x = divmod(p, width)
        table.append(p - 1 if x > 0 else -1)
        table.append(p + 1 if x < width - 1 else -1)
        table.append(p - width if y > 0 else -1)
        table.append(p + width if y < height - 1 else -1)
    return tuple(table)


@dataclasses.dataclass(frozen=True)
class ResidualState:
    """
    Residual capacities of every arc after a flow has been pushed through a graph.

    Attributes:
        src_residual: (height, width) residual of source -> pixel. The reverse arc
            pixel -> source has the residual `src_cap - src_residual`.
        snk_residual: (height, width) residual of pixel -> sink.
        nbr_residual: (4, height, width) residual of pixel -> neighbor, indexed by
            `Direction`.
        excess: (height, width) inflow minus outflow, all zeros for a proper flow.
    """

    src_residual: CapacityArray
    snk_residual: CapacityArray
    nbr_residual: CapacityArray
    excess: CapacityArray

    def flow_value(self, graph: GridGraph) -> int:
        return int((graph.snk_cap - self.snk_residual).sum())


def _reachable_from_source(graph: GridGraph, state: ResidualState) -> list[bool]:
    n = graph.size
    src_residual = state.src_residual.ravel().tolist()
    snk_residual = state.snk_residual.ravel().tolist()
    residual = state.nbr_residual.reshape(4, n).T.ravel().tolist()
    neighbor = neighbor_table(graph.width, graph.height)

    reached = [False] * n
    queue = deque(p for p in range(n) if src_residual[p] > 0)
    for p in queue:
        reached[p] = True
    while queue:
        p = queue.popleft()
        if snk_residual[p] > 0:
            raise ContractViolation(f"the sink is reachable through pixel {p}")
        base = 4 * p
        for d in range(4):
            q = neighbor[base + d]
            if q >= 0 and not reached[q] and residual[base + d] > 0:
                reached[q] = True
                queue.append(q)
    return reached


def _reaching_sink(graph: GridGraph, state: ResidualState) -> list[bool]:
    n = graph.size
    snk_residual = state.snk_residual.ravel().tolist()
    residual = state.nbr_residual.reshape(4, n).T.ravel().tolist()
    neighbor = neighbor_table(graph.width, graph.height)

    reaching = [False] * n
    queue = deque(p for p in range(n) if snk_residual[p] > 0)
    for p in queue:
        reaching[p] = True
    while queue:
        q = queue.popleft()
        for d in range(4):
            v = neighbor[4 * q + d]
            # The arc v -> q points in the reverse direction of q -> v.
            if v >= 0 and not reaching[v] and residual[4 * v + _REVERSE[d]] > 0:
                reaching[v] = True
                queue.append(v)
    return reaching


def extract_canonical_cut(
    graph: GridGraph,
    state: ResidualState,
    *,
    maximal_columns: Optional[ColumnMask] = None,
) -> Mask:
    """
    Return the minimal source side min cut of a maximum flow.

    A pixel is on the source side exactly when it is reachable from the source in
    the residual graph.

    Args:
        graph: The graph the flow was computed on.
        state: Residual state of a maximum flow of `graph`.
        maximal_columns: Optional per-column flags. In flagged columns a pixel is
            on the source side when it *cannot* reach the sink instead, which gives
            the maximal source side min cut there. Flagged columns must cover whole
            components of the graph (e.g. supergraph segments), otherwise the mixed
            mask is not a min cut.

    Raises:
        ContractViolation: When the state has leftover excess or the sink is still
            reachable, i.e. the flow isn't a maximum flow.
    """
    if state.excess.any():
        index = int(np.flatnonzero(state.excess)[0])
        raise ContractViolation(f"pixel {index} has excess {int(state.excess.ravel()[index])}")

    reached = np.array(_reachable_from_source(graph, state), dtype=np.uint8)
    mask = reached.reshape(graph.height, graph.width)
    if maximal_columns is None or not np.any(maximal_columns):
        return mask

    columns = np.asarray(maximal_columns, dtype=bool)
    if columns.shape != (graph.width,):
        raise ShapeMismatch((graph.width,), "maximal_columns", columns.shape)
    reaching = np.array(_reaching_sink(graph, state), dtype=np.uint8)
    maximal = (1 - reaching).reshape(graph.height, graph.width).astype(np.uint8)
    return np.where(columns[np.newaxis, :], maximal, mask).astype(np.uint8)
