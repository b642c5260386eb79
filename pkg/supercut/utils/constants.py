from __future__ import annotations

import enum

CAP_MAX = 2**30
"""
The "infinite" capacity used for seed pixels.

Admitted graphs keep the sum of their finite capacities strictly below this value,
so a seed edge can never be part of a minimum cut.
"""

OVERFLOW_LIMIT = 2**62
"""Upper bound (exclusive) for the sum of all capacities of an admitted graph."""


class Direction(enum.IntEnum):
    """
    The four neighbor directions of a grid pixel, in the fixed scan order.

    The integer value is also the index into `GridGraph.nbr_cap`.

    Examples:
        >>> Direction.LEFT.reverse
        <Direction.RIGHT: 1>
        >>> [d.name for d in Direction]
        ['LEFT', 'RIGHT', 'UP', 'DOWN']
    """

    LEFT = 0
    RIGHT = 1
    UP = 2
    DOWN = 3

    @property
    def reverse(self) -> Direction:
        return _REVERSE[self]


_REVERSE = {
    Direction.LEFT: Direction.RIGHT,
    Direction.RIGHT: Direction.LEFT,
    Direction.UP: Direction.DOWN,
    Direction.DOWN: Direction.UP,
}


class Policy:
    STATIC = "static"
    DYNAMIC = "dynamic"
    LPT = "lpt"

    RUNNABLE = (STATIC, DYNAMIC)


class Mode:
    SUPERGRAPH = "supergraph"
    BATCH = "batch"

    ALL = (SUPERGRAPH, BATCH)


class WorkerKind:
    LOCAL = "local"
    REMOTE = "remote"

    ALL = (LOCAL, REMOTE)


class Wire:
    REQUEST_MAGIC = b"PMFX"
    PROBLEM_MAGIC = b"PMFP"
    VERSION = 1
    LENGTH_PREFIX_BYTES = 4
    # Six capacity arrays in this order: src, snk, left, right, up, down.
    CAPACITY_ARRAYS = 6


class Status(enum.IntEnum):
    """Status codes of a `WireResponse`, 0 means success."""

    OK = 0
    BAD_MAGIC = 1
    UNKNOWN_VERSION = 2
    MALFORMED_FRAME = 3
    CAPACITY_OUT_OF_RANGE = 4
    ADMISSION_FAILED = 5
    SOLVER_ERROR = 6


class Reports:
    SCHEMA_VERSION = 1
    RECORDS_FILE = "records.jsonl"
    SUMMARY_FILE = "summary.csv"
    SUMMARY_HEADER = ("label", "policy", "mode", "images", "tasks", "min_s", "avg_s", "max_s")


class Errors:
    BORDER_CAPACITY = "Capacity toward a nonexistent neighbor must be 0, got {} at {}."
    CAPACITY_OVERFLOW = "Capacities of the graph could overflow: {}."
    CAPACITY_OUT_OF_RANGE = "Capacity {} is outside of the admissible range [0, {}]."
    CONFIG_ERROR = "Invalid configuration: {}"
    DIMENSION_MISMATCH = "All problems of a seed supergraph must share dimensions, got {} and {}."
    EMPTY_SUPERGRAPH = "A supergraph needs at least one constituent graph."
    HEIGHT_MISMATCH = "Constituent heights differ ({} vs {}) and padding is disabled."
    FRAME_TOO_LARGE = "Frame of {} bytes exceeds the limit of {} bytes."
    INSTANTIATION_OVERFLOW = "Source capacity overflows at pixel {} for lambda {}."
    INVALID_LAYOUT = "Invalid supergraph layout: {}."
    INVALID_SEEDS = "Invalid seeds: {}."
    INTEGRITY = "Worker {} returned flow {} but the labels cut {}."
    LENGTH_MISMATCH = "Frame declares {} bytes but {} were given."
    MALFORMED_FRAME = "Malformed frame: {}"
    NEGATIVE_CAPACITY = "Negative capacity {} in `{}`."
    NON_MAXIMAL_FLOW = "The residual state does not describe a maximum flow: {}."
    OVERLAP_UNDEFINED = "Overlap of two empty masks is undefined."
    REMOTE_STATUS = "Worker {} answered task {} with status {}."
    REMOTE_TIMEOUT = "Worker {} did not answer within {} s."
    REPORT_ERROR = "Can't access the report at {}: {}"
    SEED_GRID_TOO_DENSE = "A {}x{} seed grid does not fit into a {}x{} image."
    SHAPE_MISMATCH = "Expected shape {} for `{}`, got {}."
    TRANSPORT = "Could not talk to worker {}: {}"
    UNKNOWN_VERSION = "Unknown protocol version {}."
    BAD_MAGIC = "Bad magic {!r}."
    BATCH_ABORTED = "Batch aborted on task {}: {}"
    WORKER_FAILURE = "Worker {} failed on task {}: {}"
    NO_WORKERS_LEFT = "No workers left to run task {}."
