"""Length-prefixed framing shared by the wire messages and the problem files."""
from __future__ import annotations

import struct
from typing import BinaryIO, Optional

import numpy as np
import numpy.typing as npt

from supercut.utils.constants import Wire
from supercut.utils.exceptions import FrameTooLarge, MalformedFrame, OverlengthFrame, TruncatedFrame

LENGTH = struct.Struct("<I")
INT32 = np.dtype("<i4")


def frame(body: bytes) -> bytes:
    """
    Prefix `body` with its length.

    Examples:
        >>> frame(b"hello")
        b'\\x05\\x00\\x00\\x00hello'
    """
    return LENGTH.pack(len(body)) + body


def unframe(data: bytes) -> memoryview:
    """
    Return the body of a complete frame.

    Raises:
        TruncatedFrame: If there are less bytes than the prefix declares.
        OverlengthFrame: If there are more bytes than the prefix declares.

    Examples:
        >>> bytes(unframe(b"\\x02\\x00\\x00\\x00hi"))
        b'hi'
    """
    if len(data) < Wire.LENGTH_PREFIX_BYTES:
        raise TruncatedFrame(Wire.LENGTH_PREFIX_BYTES, len(data))
    (declared,) = LENGTH.unpack_from(data)
    given = len(data) - Wire.LENGTH_PREFIX_BYTES
    if given < declared:
        raise TruncatedFrame(declared, given)
    if given > declared:
        raise OverlengthFrame(declared, given)
    return memoryview(data)[Wire.LENGTH_PREFIX_BYTES :]


def read_frame(stream: BinaryIO, max_bytes: int) -> Optional[bytes]:
    """
    Read one whole frame (prefix included) from a stream.

    Returns:
        The frame, or None when the stream ended cleanly before a new frame.

    Raises:
        TruncatedFrame: If the stream ends in the middle of a frame.
        FrameTooLarge: If the frame declares more than `max_bytes` bytes.
    """
    prefix = stream.read(Wire.LENGTH_PREFIX_BYTES)
    if not prefix:
        return None
    if len(prefix) < Wire.LENGTH_PREFIX_BYTES:
        raise TruncatedFrame(Wire.LENGTH_PREFIX_BYTES, len(prefix))
    (declared,) = LENGTH.unpack(prefix)
    if declared > max_bytes:
        raise FrameTooLarge(declared, max_bytes)
    body = stream.read(declared)
    if len(body) < declared:
        raise TruncatedFrame(declared, len(body))
    return prefix + body


class Reader:
    """Reads consecutive fields from a frame body, never past its end."""

    def __init__(self, body: memoryview) -> None:
        self.body = body
        self.position = 0

    def take(self, count: int, what: str) -> memoryview:
        end = self.position + count
        if count < 0 or end > len(self.body):
            raise MalformedFrame(f"the frame ends inside {what}")
        chunk = self.body[self.position : end]
        self.position = end
        return chunk

    def unpack(self, layout: struct.Struct, what: str) -> tuple[int, ...]:
        return layout.unpack(self.take(layout.size, what))

    def int32_array(self, count: int, what: str) -> npt.NDArray[np.int64]:
        chunk = self.take(count * INT32.itemsize, what)
        return np.frombuffer(chunk, dtype=INT32).astype(np.int64)

    def finish(self) -> None:
        if self.position != len(self.body):
            raise MalformedFrame(f"{len(self.body) - self.position} trailing bytes")


def int32_bytes(array: npt.ArrayLike, what: str) -> bytes:
    """Encode values as little-endian int32."""
    values = np.asarray(array, dtype=np.int64)
    info = np.iinfo(np.int32)
    if values.size and (values.min() < info.min or values.max() > info.max):
        raise ValueError(f"`{what}` does not fit into int32.")
    return values.astype(INT32).tobytes()


def pack_bits(flags: npt.ArrayLike) -> bytes:
    """
    Pack booleans into bytes, the first flag into the lowest bit.

    Examples:
        >>> pack_bits([1, 0, 0, 0, 0, 0, 0, 0, 1])
        b'\\x01\\x01'
    """
    return np.packbits(np.asarray(flags, dtype=bool), bitorder="little").tobytes()


def unpack_bits(data: bytes, count: int, what: str) -> npt.NDArray[np.uint8]:
    """Inverse of `pack_bits`, the unused high bits of the last byte must be 0."""
    if len(data) != (count + 7) // 8:
        raise MalformedFrame(f"{what} has {len(data)} bytes for {count} bits")
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    if bits[count:].any():
        raise MalformedFrame(f"{what} has padding bits set")
    return bits[:count]
