from __future__ import annotations

import io

import numpy as np
import pytest

from supercut.netproto import frame, pack_bits, read_frame, unframe, unpack_bits
from supercut.utils.exceptions import FrameTooLarge, MalformedFrame, OverlengthFrame, TruncatedFrame


def test_unframe() -> None:
    assert bytes(unframe(frame(b""))) == b""
    assert bytes(unframe(frame(b"abc"))) == b"abc"
    with pytest.raises(TruncatedFrame):
        unframe(b"\x01\x00")
    with pytest.raises(TruncatedFrame):
        unframe(frame(b"abc")[:-1])
    with pytest.raises(OverlengthFrame):
        unframe(frame(b"abc") + b"d")


def test_read_frame() -> None:
    stream = io.BytesIO(frame(b"one") + frame(b"two"))
    assert read_frame(stream, 100) == frame(b"one")
    assert read_frame(stream, 100) == frame(b"two")
    assert read_frame(stream, 100) is None


def test_read_frame_errors() -> None:
    with pytest.raises(TruncatedFrame):
        read_frame(io.BytesIO(b"\x05\x00"), 100)
    with pytest.raises(TruncatedFrame):
        read_frame(io.BytesIO(frame(b"hello")[:-2]), 100)
    with pytest.raises(FrameTooLarge):
        read_frame(io.BytesIO(frame(b"hello")), 4)


def test_bits() -> None:
    assert pack_bits([]) == b""
    assert pack_bits([0, 1]) == b"\x02"
    assert pack_bits([1] * 8) == b"\xff"
    flags = np.random.default_rng(0).integers(0, 1, size=77, endpoint=True)
    assert unpack_bits(pack_bits(flags), 77, "flags").tolist() == flags.tolist()


def test_unpack_bits_errors() -> None:
    with pytest.raises(MalformedFrame):
        unpack_bits(b"\x01\x00", 3, "flags")
    # Bit 3 is set but only 3 bits are in use.
    with pytest.raises(MalformedFrame):
        unpack_bits(b"\x08", 3, "flags")
