"""Parametric seed problems, lambda schedules, and the sequential per-lambda baseline."""
from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from typing import Callable, Optional, Union

import numpy as np
import numpy.typing as npt
from django.conf import settings

from supercut.graphs import CutResult, GridGraph, admit, cut_cost, maxflow_pushrelabel
from supercut.graphs._grid import LabelsLike
from supercut.types import CapacityArray, Mask
from supercut.utils.constants import CAP_MAX, OVERFLOW_LIMIT
from supercut.utils.exceptions import (
    ConfigError,
    InstantiationOverflow,
    InvalidSeeds,
    NegativeCapacity,
    ShapeMismatch,
)

logger = logging.getLogger(__name__)

Solver = Callable[[GridGraph], CutResult]


@dataclasses.dataclass(frozen=True)
class LambdaSchedule:
    """
    A preset, strictly increasing list of fixed-point lambda values.

    Examples:
        >>> schedule = LambdaSchedule((1, 2, 4, 8))
        >>> len(schedule), schedule.representative_index, schedule.representative
        (4, 1, 2)
        >>> LambdaSchedule((3, 3))
        Traceback (most recent call last):
        ...
        supercut.utils.exceptions.ConfigError: Invalid configuration: lambda schedule (3, 3) is not strictly increasing
    """

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        values = tuple(int(value) for value in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ConfigError("lambda schedule is empty")
        if values[0] < 0:
            raise ConfigError(f"lambda schedule {values} has negative values")
        if any(a >= b for a, b in zip(values, values[1:])):
            raise ConfigError(f"lambda schedule {values} is not strictly increasing")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __getitem__(self, index: int) -> int:
        return self.values[index]

    @property
    def representative_index(self) -> int:
        """Index of the mid-schedule value, `ceil(n / 2) - 1`."""
        return math.ceil(len(self.values) / 2) - 1

    @property
    def representative(self) -> int:
        return self.values[self.representative_index]

    @classmethod
    def default(cls) -> LambdaSchedule:
        return cls(tuple(settings.SUPERCUT["LAMBDA_SCHEDULE"]))

    @classmethod
    def halved(cls) -> LambdaSchedule:
        return cls(tuple(settings.SUPERCUT["LAMBDA_SCHEDULE_HALVED"]))


def _frozen(values: npt.ArrayLike, shape: tuple[int, ...], name: str) -> CapacityArray:
    array = np.array(values, dtype=np.int64)
    if array.shape != shape:
        if array.size != int(np.prod(shape)):
            raise ShapeMismatch(shape, name, array.shape)
        array = array.reshape(shape)
    array.setflags(write=False)
    return array


@dataclasses.dataclass(frozen=True, eq=False)
class SeedProblem:
    """
    A monotone parametric figure-ground segmentation problem.

    Attributes:
        width: Pixels per row.
        height: Number of rows.
        unary_base: (height, width) foreground cost at lambda 0, goes to `src_cap`.
        unary_slope: (height, width) non-negative lambda multipliers.
        sink_base: (height, width) background cost, goes to `snk_cap`.
        pairwise: (4, height, width) smoothness weights indexed by `Direction`.
        fg_seeds: Pixels clamped to the foreground.
        bg_seeds: Pixels clamped to the background.
    """

    width: int
    height: int
    unary_base: CapacityArray
    unary_slope: CapacityArray
    sink_base: CapacityArray
    pairwise: CapacityArray
    fg_seeds: frozenset[int] = frozenset()
    bg_seeds: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        plane = (self.height, self.width)
        object.__setattr__(self, "unary_base", _frozen(self.unary_base, plane, "unary_base"))
        object.__setattr__(self, "unary_slope", _frozen(self.unary_slope, plane, "unary_slope"))
        object.__setattr__(self, "sink_base", _frozen(self.sink_base, plane, "sink_base"))
        object.__setattr__(self, "pairwise", _frozen(self.pairwise, (4, *plane), "pairwise"))
        object.__setattr__(self, "fg_seeds", frozenset(int(p) for p in self.fg_seeds))
        object.__setattr__(self, "bg_seeds", frozenset(int(p) for p in self.bg_seeds))

        if self.unary_slope.size and (low := int(self.unary_slope.min())) < 0:
            raise NegativeCapacity(low, "unary_slope")
        if both := self.fg_seeds & self.bg_seeds:
            raise InvalidSeeds(f"pixels {sorted(both)} are both foreground and background seeds")
        size = self.width * self.height
        if outside := sorted(p for p in self.fg_seeds | self.bg_seeds if not 0 <= p < size):
            raise InvalidSeeds(f"pixels {outside} are outside of the {self.width}x{self.height} grid")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeedProblem):
            return NotImplemented
        return (
            (self.width, self.height, self.fg_seeds, self.bg_seeds)
            == (other.width, other.height, other.fg_seeds, other.bg_seeds)
            and np.array_equal(self.unary_base, other.unary_base)
            and np.array_equal(self.unary_slope, other.unary_slope)
            and np.array_equal(self.sink_base, other.sink_base)
            and np.array_equal(self.pairwise, other.pairwise)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<SeedProblem:{self.width}x{self.height},fg={len(self.fg_seeds)},bg={len(self.bg_seeds)}>"

    @property
    def is_well_posed(self) -> bool:
        return bool(self.fg_seeds) and bool(self.bg_seeds)


def instantiate(problem: SeedProblem, lam: int) -> GridGraph:
    """
    Build the graph of `problem` for the parameter value `lam`.

    `src_cap = unary_base + lam * unary_slope`, except `CAP_MAX` on foreground
    seeds; `snk_cap = sink_base`, except `CAP_MAX` on background seeds;
    `nbr_cap = pairwise`.

    Raises:
        InstantiationOverflow: If a non-seed source capacity reaches `CAP_MAX`.
        AdmissionError: If the resulting graph is otherwise invalid.

    Examples:
        >>> p = SeedProblem(2, 1, [1, 0], [2, 0], [0, 4], np.zeros((4, 1, 2)))
        >>> instantiate(p, 3).src_cap.ravel().tolist()
        [7, 0]
    """
    if lam < 0:
        raise ValueError(f"Lambda has to be >= 0, got {lam}.")
    slope = problem.unary_slope
    if lam and slope.size and int(slope.max()) > OVERFLOW_LIMIT // lam:
        pixel = int(np.argmax(slope))
        raise InstantiationOverflow(pixel, lam)

    src = problem.unary_base + lam * slope
    snk = np.array(problem.sink_base)
    fg = np.zeros(problem.width * problem.height, dtype=bool)
    fg[list(problem.fg_seeds)] = True
    fg = fg.reshape(problem.height, problem.width)

    too_large = (src >= CAP_MAX) & ~fg
    if too_large.any():
        raise InstantiationOverflow(int(np.flatnonzero(too_large)[0]), lam)

    src[fg] = CAP_MAX
    snk.ravel()[list(problem.bg_seeds)] = CAP_MAX
    return admit(
        GridGraph(
            width=problem.width,
            height=problem.height,
            src_cap=src,
            snk_cap=snk,
            nbr_cap=problem.pairwise,
        )
    )


def energy(problem: SeedProblem, lam: int, labels: LabelsLike) -> int:
    """Return the energy of a labeling, i.e. the cut cost in the instantiated graph."""
    return cut_cost(instantiate(problem, lam), labels)


@dataclasses.dataclass(frozen=True)
class ParametricResult:
    """The canonical cuts of a problem along a schedule, `cuts[i]` is for `schedule[i]`."""

    schedule: LambdaSchedule
    cuts: tuple[CutResult, ...]

    def __post_init__(self) -> None:
        if len(self.cuts) != len(self.schedule):
            raise ValueError(f"Got {len(self.cuts)} cuts for {len(self.schedule)} lambda values.")

    @property
    def flows(self) -> tuple[int, ...]:
        return tuple(cut.flow for cut in self.cuts)

    @property
    def foregrounds(self) -> tuple[Mask, ...]:
        return tuple(cut.labels for cut in self.cuts)


def solve_schedule_sequential(
    problem: SeedProblem,
    schedule: LambdaSchedule,
    *,
    solver: Solver = maxflow_pushrelabel,
) -> ParametricResult:
    """Solve every instantiation of `problem` separately, the baseline of the supergraphs."""
    cuts = tuple(solver(instantiate(problem, lam)) for lam in schedule)
    logger.debug(f"Solved {problem} for {len(schedule)} lambda values, flows {[c.flow for c in cuts]}.")
    return ParametricResult(schedule=schedule, cuts=cuts)


@dataclasses.dataclass(frozen=True)
class NestingCheck:
    """Outcome of a check along a schedule, `violation` is the first failing index."""

    holds: bool
    violation: Optional[int] = None

    def __bool__(self) -> bool:
        return self.holds


def check_nested(result: Union[ParametricResult, Sequence[Mask]]) -> NestingCheck:
    """
    Check that the foregrounds only grow along the schedule.

    Examples:
        >>> check_nested([np.array([1, 0]), np.array([1, 1])])
        NestingCheck(holds=True, violation=None)
        >>> check_nested([np.array([1, 0]), np.array([0, 0])])
        NestingCheck(holds=False, violation=1)
    """
    masks = result.foregrounds if isinstance(result, ParametricResult) else result
    previous: Optional[Mask] = None
    for index, mask in enumerate(masks):
        current = np.asarray(mask) != 0
        # Subset checks between neighbors are enough, inclusion is transitive.
        if previous is not None and np.any(previous & ~current):
            return NestingCheck(holds=False, violation=index)
        previous = current
    return NestingCheck(holds=True)


def check_monotone_flows(result: Union[ParametricResult, Iterable[int]]) -> NestingCheck:
    """Check that the flows are non-decreasing along the schedule."""
    flows = list(result.flows if isinstance(result, ParametricResult) else result)
    for index in range(1, len(flows)):
        if flows[index] < flows[index - 1]:
            return NestingCheck(holds=False, violation=index)
    return NestingCheck(holds=True)


def to_fixed_point(values: npt.ArrayLike, scale: Optional[int] = None) -> CapacityArray:
    """
    Convert real valued weights to integers, rounding half up.

    Args:
        values: The real valued weights.
        scale: Multiplier, defaults to `settings.SUPERCUT["WEIGHT_SCALE"]`.

    Examples:
        >>> to_fixed_point([0.5, 1.25, 0.125], scale=4).tolist()
        [2, 5, 1]
    """
    if scale is None:
        scale = int(settings.SUPERCUT["WEIGHT_SCALE"])
    scaled = np.asarray(values, dtype=np.float64) * scale
    return np.floor(scaled + 0.5).astype(np.int64)
