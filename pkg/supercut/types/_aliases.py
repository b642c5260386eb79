"""This module contains all the custom type aliases that are used in the app."""
from __future__ import annotations

from typing import Any

import numpy as np
import numpy.typing as npt

CapacityArray = npt.NDArray[np.int64]
"""
A 2D (height x width) or 3D (direction x height x width) array of capacities.

Always `int64`, so that sums over any cut of an admitted graph fit comfortably.
"""

Mask = npt.NDArray[np.uint8]
"""
A height x width binary label mask.

1 marks a source side (foreground) pixel, 0 a sink side (background) pixel.
"""

ColumnMask = npt.NDArray[np.bool_]
"""A boolean array with one entry per grid column."""

Fixture = Any
"""
A type representing the return value of a pytest fixture.

Fixtures are just functions that are decorated with @pytest.fixture.
Using this as the type of a parameter makes its purpose immediately clear.
"""

JsonDict = dict[str, Any]
"""A type representing a JSON object like dictionary."""

JsonList = list[JsonDict]
"""A type representing a list of JSON object like dictionaries."""
