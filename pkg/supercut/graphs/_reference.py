from __future__ import annotations

from typing import Optional, Union

import networkx as nx
import numpy as np
from networkx.algorithms.flow import shortest_augmenting_path

from supercut.graphs._grid import CutResult, GridGraph, admit
from supercut.graphs._residual import ResidualState, extract_canonical_cut, neighbor_table
from supercut.types import ColumnMask
from supercut.utils.constants import Direction

SOURCE = "s"
SINK = "t"

Node = Union[int, str]


def to_network(graph: GridGraph) -> nx.DiGraph:
    """
    Convert a grid graph into a `networkx` digraph with `capacity` edge attributes.

    Pixels are the integer nodes `0 .. width * height - 1`, the terminals are the
    string nodes `"s"` and `"t"`. Zero capacity edges are left out.

    Examples:
        >>> g = GridGraph.from_edges(2, 1, [5, 0], [0, 3], {(0, 1): 2, (1, 0): 2})
        >>> sorted(to_network(g).edges(data="capacity"), key=str)
        [('s', 0, 5), (0, 1, 2), (1, 't', 3), (1, 0, 2)]
    """
    network = nx.DiGraph()
    network.add_nodes_from([SOURCE, SINK])
    network.add_nodes_from(range(graph.size))
    src = graph.src_cap.ravel().tolist()
    snk = graph.snk_cap.ravel().tolist()
    neighbor = neighbor_table(graph.width, graph.height)
    for p in range(graph.size):
        if src[p]:
            network.add_edge(SOURCE, p, capacity=src[p])
        if snk[p]:
            network.add_edge(p, SINK, capacity=snk[p])
    for direction in Direction:
        for p, cap in enumerate(graph.nbr_cap[direction].ravel().tolist()):
            if cap:
                network.add_edge(p, neighbor[4 * p + direction], capacity=cap)
    return network


def _flow(residual: nx.DiGraph, u: Node, v: Node) -> int:
    if residual.has_edge(u, v):
        return int(residual[u][v]["flow"])
    return 0


def maxflow_reference(
    graph: GridGraph,
    *,
    maximal_columns: Optional[ColumnMask] = None,
) -> CutResult:
    """
    Solve `graph` with the shortest augmenting path algorithm of `networkx`.

    Slow, but independent from `maxflow_pushrelabel`, which makes it the oracle
    in the tests. The canonical cut gets extracted with the very same function,
    so both solvers have to agree on the labels too.
    """
    admit(graph, bounded_by_cap_max=False)
    residual = shortest_augmenting_path(to_network(graph), SOURCE, SINK)
    neighbor = neighbor_table(graph.width, graph.height)

    n = graph.size
    plane = (graph.height, graph.width)
    source_flow = [_flow(residual, SOURCE, p) for p in range(n)]
    sink_flow = [_flow(residual, p, SINK) for p in range(n)]
    # `flow` is antisymmetric in the residual network, so this is the net flow p -> q.
    net = np.zeros((4, n), dtype=np.int64)
    for p in range(n):
        for direction in Direction:
            q = neighbor[4 * p + direction]
            if q >= 0:
                net[direction, p] = _flow(residual, p, q)

    excess = np.array(source_flow, dtype=np.int64) - np.array(sink_flow, dtype=np.int64) - net.sum(axis=0)
    state = ResidualState(
        src_residual=graph.src_cap - np.array(source_flow, dtype=np.int64).reshape(plane),
        snk_residual=graph.snk_cap - np.array(sink_flow, dtype=np.int64).reshape(plane),
        nbr_residual=graph.nbr_cap - net.reshape(4, *plane),
        excess=excess.reshape(plane),
    )
    labels = extract_canonical_cut(graph, state, maximal_columns=maximal_columns)
    return CutResult(flow=int(residual.graph["flow_value"]), labels=labels)
