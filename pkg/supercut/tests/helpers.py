from __future__ import annotations

import socket
from typing import Any

import numpy as np

from supercut.graphs import GridGraph
from supercut.harness import BenchConfig, config_from_mapping

# The two pixel example: s -> p0 -> p1 -> t with a bottleneck of 2 in the middle.
TWO_PIXELS = GridGraph.from_edges(2, 1, [5, 0], [0, 3], {(0, 1): 2, (1, 0): 2})

# Source into the top left corner, sink out of the bottom right one, unit edges everywhere.
CORNERS = GridGraph.from_edges(
    2,
    2,
    [9, 0, 0, 0],
    [0, 0, 0, 9],
    {(0, 1): 1, (1, 0): 1, (0, 2): 1, (2, 0): 1, (1, 3): 1, (3, 1): 1, (2, 3): 1, (3, 2): 1},
)


def small_config(**changes: Any) -> BenchConfig:
    """A config that runs in well under a second on local workers."""
    data = {
        "image_width": 8,
        "image_height": 8,
        "images": 1,
        "seed_grid": [2, 2],
        "seed_count": 4,
        "lambda_schedule": [1, 4, 16, 64],
        "seeds_per_supergraph": 2,
        "workers": [{"kind": "local", "slots": 1}, {"kind": "local", "slots": 1}],
    }
    data.update(changes)
    return config_from_mapping(data)


def dead_endpoint() -> str:
    """An endpoint of the loopback interface that nothing listens on."""
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return "127.0.0.1:{}".format(sock.getsockname()[1])


def mask(*rows: str) -> np.ndarray:
    """
    Build a mask from strings of zeros and ones.

    Examples:
        >>> mask("10", "01").tolist()
        [[1, 0], [0, 1]]
    """
    return np.array([[int(char) for char in row] for row in rows], dtype=np.uint8)
