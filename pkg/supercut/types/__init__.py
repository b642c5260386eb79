from __future__ import annotations

from ._aliases import CapacityArray, ColumnMask, Fixture, JsonDict, JsonList, Mask

__all__ = [
    "CapacityArray",
    "ColumnMask",
    "Fixture",
    "JsonDict",
    "JsonList",
    "Mask",
]
