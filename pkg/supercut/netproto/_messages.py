"""
The binary wire format of the worker protocol.

Every message is a frame: an unsigned 32-bit little-endian byte count followed by
that many bytes. All integers are little-endian.

Request body::

    magic "PMFX" | u16 version | u16 flags (reserved, 0)
    u64 task id | u32 width | u32 height
    u32 swap bitmap bytes | swap bitmap, one bit per segment
    u32 segment count | per segment: u32 offset, u32 width, u8 swapped
    6 x width * height i32: src, snk, left, right, up, down

Response body::

    u64 task id | u16 status | u64 flow | label bitmap, one bit per pixel

Bitmaps are row-major, the first pixel (or segment) sits in the lowest bit of
the first byte, a set bit means foreground (or swapped).
"""
from __future__ import annotations

import dataclasses
import struct

import numpy as np
import numpy.typing as npt

from supercut.graphs import CutResult, GridGraph
from supercut.netproto._framing import (
    Reader,
    frame,
    int32_bytes,
    pack_bits,
    unframe,
    unpack_bits,
)
from supercut.parametric import SeedProblem
from supercut.supergraphs import Segment, SupergraphLayout
from supercut.types import Mask
from supercut.utils.constants import CAP_MAX, Status, Wire
from supercut.utils.exceptions import (
    BadMagic,
    CapacityOutOfRange,
    InvalidLayout,
    MalformedFrame,
    SupergraphError,
    UnknownVersion,
)

_PREAMBLE = struct.Struct("<4sHH")
_REQUEST_HEADER = struct.Struct("<QII")
_COUNT = struct.Struct("<I")
_SEGMENT = struct.Struct("<IIB")
_RESPONSE_HEADER = struct.Struct("<QHQ")
_PROBLEM_HEADER = struct.Struct("<II")


def wire_layout(layout: SupergraphLayout) -> SupergraphLayout:
    """
    Return the part of a layout that travels on the wire.

    Constituent ids become segment indices and every segment spans the full height.
    """
    return SupergraphLayout.build(
        [(segment.width, layout.height) for segment in layout.segments],
        swapped=layout.swapped,
    )


@dataclasses.dataclass(frozen=True)
class WireRequest:
    task_id: int
    graph: GridGraph
    layout: SupergraphLayout

    def __post_init__(self) -> None:
        object.__setattr__(self, "layout", wire_layout(self.layout))
        if (self.layout.width, self.layout.height) != (self.graph.width, self.graph.height):
            raise InvalidLayout(
                f"layout is {self.layout.width}x{self.layout.height}, "
                f"graph is {self.graph.width}x{self.graph.height}"
            )

    @classmethod
    def single(cls, task_id: int, graph: GridGraph) -> WireRequest:
        """A request for a plain graph, i.e. a supergraph of one unswapped constituent."""
        return cls(task_id, graph, SupergraphLayout.build([(graph.width, graph.height)]))


@dataclasses.dataclass(frozen=True)
class WireResponse:
    task_id: int
    status: Status
    flow: int = 0
    bitmap: bytes = b""

    @classmethod
    def ok(cls, task_id: int, cut: CutResult) -> WireResponse:
        return cls(task_id, Status.OK, cut.flow, pack_bits(cut.labels.ravel()))

    @classmethod
    def error(cls, task_id: int, status: Status) -> WireResponse:
        return cls(task_id, status)

    def labels(self, width: int, height: int) -> Mask:
        """
        Unpack the label bitmap of a successful response.

        Raises:
            MalformedFrame: If the bitmap doesn't match the dimensions.
        """
        bits = unpack_bits(self.bitmap, width * height, "label bitmap")
        return bits.reshape(height, width).astype(np.uint8)


def _check_preamble(reader: Reader, magic: bytes) -> None:
    found, version, __ = reader.unpack(_PREAMBLE, "the preamble")
    if found != magic:
        raise BadMagic(bytes(found))
    if version != Wire.VERSION:
        raise UnknownVersion(version)


def _check_range(values: npt.NDArray[np.int64]) -> None:
    if values.size:
        low, high = int(values.min()), int(values.max())
        if low < 0:
            raise CapacityOutOfRange(low, CAP_MAX)
        if high > CAP_MAX:
            raise CapacityOutOfRange(high, CAP_MAX)


def _dimensions(width: int, height: int) -> int:
    if width < 1 or height < 1:
        raise MalformedFrame(f"dimensions {width}x{height}")
    return width * height


def encode_request(request: WireRequest) -> bytes:
    graph, layout = request.graph, request.layout
    parts = [
        _PREAMBLE.pack(Wire.REQUEST_MAGIC, Wire.VERSION, 0),
        _REQUEST_HEADER.pack(request.task_id, graph.width, graph.height),
    ]
    bitmap = pack_bits(layout.swapped)
    parts.append(_COUNT.pack(len(bitmap)) + bitmap)
    parts.append(_COUNT.pack(len(layout.segments)))
    parts.extend(_SEGMENT.pack(s.offset, s.width, int(s.swapped)) for s in layout.segments)
    parts.append(int32_bytes(graph.src_cap, "src_cap"))
    parts.append(int32_bytes(graph.snk_cap, "snk_cap"))
    parts.extend(int32_bytes(plane, "nbr_cap") for plane in graph.nbr_cap)
    return frame(b"".join(parts))


def decode_request(data: bytes) -> WireRequest:
    """
    Decode a request frame.

    Raises:
        TruncatedFrame: The frame is shorter than it declares.
        OverlengthFrame: The frame is longer than it declares.
        BadMagic: The body doesn't start with "PMFX".
        UnknownVersion: The version isn't 1.
        MalformedFrame: The body is inconsistent in itself.
        CapacityOutOfRange: A capacity is negative or above `CAP_MAX`.
    """
    reader = Reader(unframe(data))
    _check_preamble(reader, Wire.REQUEST_MAGIC)
    task_id, width, height = reader.unpack(_REQUEST_HEADER, "the header")
    size = _dimensions(width, height)

    (bitmap_bytes,) = reader.unpack(_COUNT, "the swap bitmap length")
    bitmap = bytes(reader.take(bitmap_bytes, "the swap bitmap"))
    (count,) = reader.unpack(_COUNT, "the segment count")
    if count < 1 or count > width:
        raise MalformedFrame(f"{count} segments in {width} columns")
    segments = []
    for index in range(count):
        offset, segment_width, swapped = reader.unpack(_SEGMENT, f"segment {index}")
        if swapped not in (0, 1):
            raise MalformedFrame(f"segment {index} has swapped flag {swapped}")
        segments.append(Segment(index, offset, segment_width, height, bool(swapped)))
    flags = unpack_bits(bitmap, count, "swap bitmap")
    if flags.tolist() != [int(s.swapped) for s in segments]:
        raise MalformedFrame("the swap bitmap disagrees with the segments")
    try:
        layout = SupergraphLayout(
            segments=tuple(segments),
            bridge_columns=tuple(s.offset + s.width for s in segments[:-1]),
            height=height,
        )
    except SupergraphError as exc:
        raise MalformedFrame(str(exc)) from exc

    arrays = []
    for name in ("src", "snk", "left", "right", "up", "down"):
        values = reader.int32_array(size, f"the {name} capacities")
        _check_range(values)
        arrays.append(values.reshape(height, width))
    reader.finish()

    graph = GridGraph(width, height, arrays[0], arrays[1], np.stack(arrays[2:]))
    try:
        return WireRequest(task_id, graph, layout)
    except InvalidLayout as exc:
        raise MalformedFrame(str(exc)) from exc


def encode_response(response: WireResponse) -> bytes:
    header = _RESPONSE_HEADER.pack(response.task_id, response.status, response.flow)
    return frame(header + response.bitmap)


def decode_response(data: bytes) -> WireResponse:
    reader = Reader(unframe(data))
    task_id, status, flow = reader.unpack(_RESPONSE_HEADER, "the header")
    try:
        known = Status(status)
    except ValueError:
        raise MalformedFrame(f"unknown status {status}") from None
    bitmap = bytes(reader.take(len(reader.body) - reader.position, "the label bitmap"))
    return WireResponse(task_id, known, flow, bitmap)


def peek_task_id(data: bytes) -> int:
    """Best effort task id of a request frame that failed to decode, 0 if unknown."""
    start = 4 + _PREAMBLE.size
    if len(data) < start + 8:
        return 0
    return int(struct.unpack_from("<Q", data, start)[0])


def request_size(width: int, height: int, segments: int) -> int:
    """
    Return the exact number of bytes of an encoded request, prefix included.

    Examples:
        >>> request_size(20 * 64 + 19, 64, 20) - 6 * (20 * 64 + 19) * 64 * 4
        219
    """
    header = 4 + _PREAMBLE.size + _REQUEST_HEADER.size
    layout = _COUNT.size + (segments + 7) // 8 + _COUNT.size + segments * _SEGMENT.size
    return header + layout + Wire.CAPACITY_ARRAYS * width * height * 4


def encode_problem(problem: SeedProblem) -> bytes:
    """
    Encode a problem with the same framing as the wire messages.

    Body: magic "PMFP", u16 version, u16 flags, u32 width, u32 height, u32 count
    and sorted u32 indices of the foreground seeds, the same for the background
    seeds, then as i32 arrays unary_base, unary_slope, sink_base and the four
    pairwise planes.
    """
    parts = [
        _PREAMBLE.pack(Wire.PROBLEM_MAGIC, Wire.VERSION, 0),
        _PROBLEM_HEADER.pack(problem.width, problem.height),
    ]
    for seeds in (problem.fg_seeds, problem.bg_seeds):
        parts.append(_COUNT.pack(len(seeds)))
        parts.append(np.array(sorted(seeds), dtype="<u4").tobytes())
    parts.append(int32_bytes(problem.unary_base, "unary_base"))
    parts.append(int32_bytes(problem.unary_slope, "unary_slope"))
    parts.append(int32_bytes(problem.sink_base, "sink_base"))
    parts.extend(int32_bytes(plane, "pairwise") for plane in problem.pairwise)
    return frame(b"".join(parts))


def decode_problem(data: bytes) -> SeedProblem:
    reader = Reader(unframe(data))
    _check_preamble(reader, Wire.PROBLEM_MAGIC)
    width, height = reader.unpack(_PROBLEM_HEADER, "the header")
    size = _dimensions(width, height)
    seeds: list[frozenset[int]] = []
    for name in ("foreground", "background"):
        (count,) = reader.unpack(_COUNT, f"the {name} seed count")
        chunk = reader.take(4 * count, f"the {name} seeds")
        seeds.append(frozenset(np.frombuffer(chunk, dtype="<u4").tolist()))
    arrays = [reader.int32_array(size, name) for name in ("unary_base", "unary_slope", "sink_base")]
    pairwise = np.stack([reader.int32_array(size, "pairwise").reshape(height, width) for __ in range(4)])
    reader.finish()
    return SeedProblem(
        width=width,
        height=height,
        unary_base=arrays[0].reshape(height, width),
        unary_slope=arrays[1].reshape(height, width),
        sink_base=arrays[2].reshape(height, width),
        pairwise=pairwise,
        fg_seeds=seeds[0],
        bg_seeds=seeds[1],
    )

