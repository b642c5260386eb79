from __future__ import annotations

import dataclasses
import logging
from collections.abc import Mapping, Sequence
from typing import Any, Optional, Union

import numpy as np
import numpy.typing as npt

from supercut.types import CapacityArray, Mask
from supercut.utils.constants import CAP_MAX, OVERFLOW_LIMIT, Direction
from supercut.utils.exceptions import (
    BorderCapacity,
    CapacityOverflow,
    NegativeCapacity,
    ShapeMismatch,
)

logger = logging.getLogger(__name__)

LabelsLike = Union[Mask, Sequence[int], npt.NDArray[Any]]


def _frozen_array(values: Any, shape: Optional[tuple[int, ...]] = None) -> CapacityArray:
    array = np.array(values, dtype=np.int64)
    if shape is not None and array.size == int(np.prod(shape)):
        array = array.reshape(shape)
    array.setflags(write=False)
    return array


@dataclasses.dataclass(frozen=True, eq=False)
class GridGraph:
    """
    A 4-connected rectangular pixel graph with a source and a sink.

    Attributes:
        width: Pixels per row.
        height: Number of rows.
        src_cap: (height, width) capacities of the source -> pixel edges.
        snk_cap: (height, width) capacities of the pixel -> sink edges.
        nbr_cap: (4, height, width) capacities of the directed edges from a pixel to
            its neighbor, indexed by `Direction`. Entries pointing out of the image
            have to be 0.

    All arrays are copied into read-only `int64` arrays, so a graph can be shared
    freely between threads. Validity is checked separately with `admit()`.
    """

    width: int
    height: int
    src_cap: CapacityArray
    snk_cap: CapacityArray
    nbr_cap: CapacityArray

    def __post_init__(self) -> None:
        plane = (self.height, self.width)
        object.__setattr__(self, "src_cap", _frozen_array(self.src_cap, plane))
        object.__setattr__(self, "snk_cap", _frozen_array(self.snk_cap, plane))
        object.__setattr__(self, "nbr_cap", _frozen_array(self.nbr_cap, (4, *plane)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridGraph):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.src_cap, other.src_cap)
            and np.array_equal(self.snk_cap, other.snk_cap)
            and np.array_equal(self.nbr_cap, other.nbr_cap)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<GridGraph:{self.width}x{self.height}>"

    @property
    def size(self) -> int:
        return self.width * self.height

    @classmethod
    def zeros(cls, width: int, height: int) -> GridGraph:
        return cls(
            width=width,
            height=height,
            src_cap=np.zeros((height, width), dtype=np.int64),
            snk_cap=np.zeros((height, width), dtype=np.int64),
            nbr_cap=np.zeros((4, height, width), dtype=np.int64),
        )

    @classmethod
    def from_edges(
        cls,
        width: int,
        height: int,
        src_cap: Sequence[int],
        snk_cap: Sequence[int],
        edges: Optional[Mapping[tuple[int, int], int]] = None,
    ) -> GridGraph:
        """
        Build a graph from flat row-major terminal capacities and an edge mapping.

        Args:
            width: Pixels per row.
            height: Number of rows.
            src_cap: Flat source capacities, `width * height` entries.
            snk_cap: Flat sink capacities, `width * height` entries.
            edges: Maps `(p, q)` pixel index pairs of adjacent pixels to the capacity
                of the directed edge p -> q.

        Examples:
            >>> g = GridGraph.from_edges(2, 1, [5, 0], [0, 3], {(0, 1): 2, (1, 0): 2})
            >>> int(g.nbr_cap[Direction.RIGHT][0, 0]), int(g.nbr_cap[Direction.LEFT][0, 1])
            (2, 2)
        """
        nbr = np.zeros((4, height, width), dtype=np.int64)
        for (p, q), cap in (edges or {}).items():
            nbr[neighbor_direction(width, p, q)][divmod(p, width)] = cap
        return cls(
            width=width,
            height=height,
            src_cap=np.reshape(np.array(src_cap, dtype=np.int64), (height, width)),
            snk_cap=np.reshape(np.array(snk_cap, dtype=np.int64), (height, width)),
            nbr_cap=nbr,
        )

    def crop(self, column: int, width: int, height: Optional[int] = None) -> GridGraph:
        """Return the sub-graph of `width` columns starting at `column` (and the top `height` rows)."""
        rows = self.height if height is None else height
        nbr = np.array(self.nbr_cap[:, :rows, column : column + width])
        # Edges that leave the window become border edges.
        nbr[Direction.LEFT, :, 0] = 0
        nbr[Direction.RIGHT, :, -1] = 0
        nbr[Direction.UP, 0, :] = 0
        nbr[Direction.DOWN, -1, :] = 0
        return GridGraph(
            width=width,
            height=rows,
            src_cap=self.src_cap[:rows, column : column + width],
            snk_cap=self.snk_cap[:rows, column : column + width],
            nbr_cap=nbr,
        )


def neighbor_direction(width: int, p: int, q: int) -> Direction:
    """
    Return the direction in which pixel `q` lies from pixel `p`.

    Raises:
        ValueError: If the pixels are not 4-neighbors.
    """
    py, px = divmod(p, width)
    qy, qx = divmod(q, width)
    offsets = {
        (0, -1): Direction.LEFT,
        (0, 1): Direction.RIGHT,
        (-1, 0): Direction.UP,
        (1, 0): Direction.DOWN,
    }
    try:
        return offsets[(qy - py, qx - px)]
    except KeyError:
        raise ValueError(f"Pixels {p} and {q} are not neighbors.") from None


@dataclasses.dataclass(frozen=True, eq=False)
class CutResult:
    """
    The outcome of a max-flow computation.

    Attributes:
        flow: The max-flow value, equal to the cost of the min cut.
        labels: (height, width) mask, 1 = source side (foreground).
    """

    flow: int
    labels: Mask

    def __post_init__(self) -> None:
        labels = np.array(self.labels, dtype=np.uint8)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "flow", int(self.flow))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CutResult):
            return NotImplemented
        return self.flow == other.flow and np.array_equal(self.labels, other.labels)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<CutResult:flow={self.flow},fg={self.foreground_count}>"

    @property
    def foreground_count(self) -> int:
        return int(self.labels.sum())


def admit(graph: GridGraph, *, bounded_by_cap_max: bool = True) -> GridGraph:
    """
    Verify all the invariants of a graph and return it unchanged.

    Args:
        graph: The graph to validate.
        bounded_by_cap_max: Whether the finite capacities have to sum up below
            `CAP_MAX`. Supergraphs turn this off for the composite, since each
            constituent has already been verified on its own and the bridges keep
            them from sharing any cut.

    Raises:
        ShapeMismatch: The arrays don't match the declared dimensions.
        NegativeCapacity: Any capacity is below 0.
        BorderCapacity: An edge pointing out of the image has a nonzero capacity.
        CapacityOverflow: A capacity is above `CAP_MAX`, or the sums could overflow.
    """
    if graph.width < 1 or graph.height < 1:
        raise ShapeMismatch("at least 1x1", "dimensions", (graph.width, graph.height))
    plane = (graph.height, graph.width)
    for name, array, shape in (
        ("src_cap", graph.src_cap, plane),
        ("snk_cap", graph.snk_cap, plane),
        ("nbr_cap", graph.nbr_cap, (4, *plane)),
    ):
        if array.shape != shape:
            raise ShapeMismatch(shape, name, array.shape)
        if array.size and (low := int(array.min())) < 0:
            raise NegativeCapacity(low, name)
        if array.size and (high := int(array.max())) > CAP_MAX:
            raise CapacityOverflow(f"`{name}` holds {high} > CAP_MAX")

    nbr = graph.nbr_cap
    for direction, border in (
        (Direction.LEFT, nbr[Direction.LEFT, :, 0]),
        (Direction.RIGHT, nbr[Direction.RIGHT, :, -1]),
        (Direction.UP, nbr[Direction.UP, 0, :]),
        (Direction.DOWN, nbr[Direction.DOWN, -1, :]),
    ):
        if border.any():
            index = int(np.flatnonzero(border)[0])
            raise BorderCapacity(int(border[index]), f"{direction.name} edge #{index}")

    arrays = (graph.src_cap, graph.snk_cap, graph.nbr_cap)
    if 6 * graph.size * CAP_MAX >= OVERFLOW_LIMIT:
        raise CapacityOverflow(f"{graph.size} pixels is too many")
    total = sum(int(array.sum()) for array in arrays)
    if total >= OVERFLOW_LIMIT:
        raise CapacityOverflow(f"total capacity {total} >= 2^62")

    if bounded_by_cap_max:
        finite = sum(int(array[array != CAP_MAX].sum()) for array in arrays)
        if finite >= CAP_MAX:
            raise CapacityOverflow(f"finite capacities sum to {finite} >= CAP_MAX")

    return graph


def as_mask(graph: GridGraph, labels: LabelsLike) -> Mask:
    """
    Coerce flat or 2D labels into a (height, width) mask of the graph.

    Raises:
        ShapeMismatch: If the labels don't have `width * height` entries.
    """
    array = np.asarray(labels)
    if array.size != graph.size:
        raise ShapeMismatch((graph.height, graph.width), "labels", array.shape)
    return (array.reshape(graph.height, graph.width) != 0).astype(np.uint8)


def neighbor_labels(mask: Mask, direction: Direction) -> Mask:
    """
    Return for every pixel the label of its neighbor in `direction`.

    Pixels on the border get their own label, so that a border "edge" never
    crosses the cut.
    """
    shifted = mask.copy()
    if direction == Direction.LEFT:
        shifted[:, 1:] = mask[:, :-1]
    elif direction == Direction.RIGHT:
        shifted[:, :-1] = mask[:, 1:]
    elif direction == Direction.UP:
        shifted[1:, :] = mask[:-1, :]
    else:
        shifted[:-1, :] = mask[1:, :]
    return shifted


def cut_cost(graph: GridGraph, labels: LabelsLike) -> int:
    """
    Return the cost of the s-t cut induced by `labels`.

    The cost is the sum of the sink capacities of source side pixels, the source
    capacities of sink side pixels, and the capacities of the neighbor edges going
    from the source side to the sink side.

    Examples:
        >>> g = GridGraph.from_edges(2, 1, [5, 0], [0, 3], {(0, 1): 2, (1, 0): 2})
        >>> cut_cost(g, [1, 0]), cut_cost(g, [0, 0]), cut_cost(g, [1, 1])
        (2, 5, 3)
    """
    mask = as_mask(graph, labels).astype(bool)
    cost = int(graph.snk_cap[mask].sum()) + int(graph.src_cap[~mask].sum())
    for direction in Direction:
        crossing = mask & ~neighbor_labels(mask, direction)
        cost += int(graph.nbr_cap[direction][crossing].sum())
    return cost
