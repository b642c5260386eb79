from __future__ import annotations

from ._grid import (
    CutResult,
    GridGraph,
    admit,
    as_mask,
    cut_cost,
    neighbor_direction,
    neighbor_labels,
)
from ._pushrelabel import PushRelabel, maxflow_pushrelabel
from ._reference import maxflow_reference, to_network
from ._residual import ResidualState, extract_canonical_cut, neighbor_table

__all__ = [
    "CutResult",
    "GridGraph",
    "PushRelabel",
    "ResidualState",
    "admit",
    "as_mask",
    "cut_cost",
    "extract_canonical_cut",
    "maxflow_pushrelabel",
    "maxflow_reference",
    "neighbor_direction",
    "neighbor_labels",
    "neighbor_table",
    "to_network",
]
