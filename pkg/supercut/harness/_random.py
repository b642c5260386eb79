"""Random instances for the differential checks of `verify` and the test suite."""
from __future__ import annotations

from typing import Optional

import numpy as np

from supercut.graphs import GridGraph
from supercut.parametric import SeedProblem


def _zero_borders(nbr: np.ndarray) -> np.ndarray:
    nbr[0, :, 0] = 0
    nbr[1, :, -1] = 0
    nbr[2, 0, :] = 0
    nbr[3, -1, :] = 0
    return nbr


def random_grid(
    rng: np.random.Generator,
    *,
    max_width: int = 8,
    max_height: int = 8,
    max_cap: int = 10,
    width: Optional[int] = None,
    height: Optional[int] = None,
) -> GridGraph:
    """A grid with every capacity uniform in `[0, max_cap]`, the sizes too unless given."""
    width = width or int(rng.integers(1, max_width, endpoint=True))
    height = height or int(rng.integers(1, max_height, endpoint=True))
    return GridGraph(
        width=width,
        height=height,
        src_cap=rng.integers(0, max_cap, size=(height, width), endpoint=True),
        snk_cap=rng.integers(0, max_cap, size=(height, width), endpoint=True),
        nbr_cap=_zero_borders(rng.integers(0, max_cap, size=(4, height, width), endpoint=True)),
    )


def random_problem(rng: np.random.Generator, width: int = 8, height: int = 8) -> SeedProblem:
    """A monotone problem with one foreground seed and some background seeds on the border."""
    size = width * height
    fg = int(rng.integers(size))
    border = [
        y * width + x
        for y in range(height)
        for x in range(width)
        if (y in (0, height - 1) or x in (0, width - 1)) and y * width + x != fg
    ]
    picked = rng.random(len(border)) < 0.5
    return SeedProblem(
        width=width,
        height=height,
        unary_base=rng.integers(0, 20, size=(height, width), endpoint=True),
        unary_slope=rng.integers(0, 3, size=(height, width), endpoint=True),
        sink_base=rng.integers(0, 60, size=(height, width), endpoint=True),
        pairwise=_zero_borders(rng.integers(0, 10, size=(4, height, width), endpoint=True)),
        fg_seeds=frozenset({fg}),
        bg_seeds=frozenset(p for p, keep in zip(border, picked) if keep),
    )
