"""
Synthetic segmentation problems.

An image is a Voronoi partition of the grid into a few regions, each with a
constant intensity in [0, 1], plus Gaussian noise. Every foreground seed gets one
problem: pixels similar to the seed's intensity are cheap to put into the
foreground, the smoothness weights follow the intensity edges, the border of the
image is clamped to the background and lambda adds a uniform foreground bias.
"""
from __future__ import annotations

import dataclasses
import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Optional

import numpy as np
import numpy.typing as npt
from django.conf import settings

from supercut.harness._config import BenchConfig
from supercut.netproto import decode_problem, encode_problem, read_frame
from supercut.parametric import SeedProblem, to_fixed_point
from supercut.types import JsonDict, Mask
from supercut.utils.constants import Reports
from supercut.utils.exceptions import ConfigError, SeedGridTooDense

logger = logging.getLogger(__name__)

REGIONS = 5
NOISE = 0.05
FOREGROUND_WEIGHT = 1.0
BACKGROUND_WEIGHT = 8.0
SMOOTHNESS_WEIGHT = 2.0
SMOOTHNESS_SIGMA = 0.1


@dataclasses.dataclass(frozen=True, eq=False)
class SyntheticImage:
    """
    Attributes:
        intensity: (height, width) values in [0, 1].
        regions: (height, width) region index of every pixel, the ground truth.
    """

    intensity: npt.NDArray[np.float64]
    regions: npt.NDArray[np.int64]

    @property
    def width(self) -> int:
        return int(self.intensity.shape[1])

    @property
    def height(self) -> int:
        return int(self.intensity.shape[0])

    def region_masks(self) -> list[Mask]:
        """The ground truth segments, one mask per region that has any pixels."""
        return [
            (self.regions == region).astype(np.uint8)
            for region in np.unique(self.regions).tolist()
        ]


def generate_image(width: int, height: int, rng: np.random.Generator) -> SyntheticImage:
    ys, xs = np.mgrid[0:height, 0:width]
    centers = rng.uniform((0, 0), (height, width), size=(REGIONS, 2))
    distances = (ys[None] - centers[:, 0, None, None]) ** 2 + (xs[None] - centers[:, 1, None, None]) ** 2
    regions = np.argmin(distances, axis=0).astype(np.int64)
    levels = rng.uniform(0, 1, size=REGIONS)
    noise = rng.normal(0, NOISE, size=(height, width))
    intensity = np.clip(levels[regions] + noise, 0.0, 1.0)
    return SyntheticImage(intensity=intensity, regions=regions)


def seed_positions(config: BenchConfig) -> list[int]:
    """
    Return the pixels of the foreground seeds.

    Seed `(i, j)` of a `rows x columns` grid sits at row
    `floor((i + 0.5) * height / rows)` and column `floor((j + 0.5) * width / columns)`;
    the first `seed_count` seeds in row-major order are used.

    Raises:
        SeedGridTooDense: If the grid has more rows or columns than the image.
        ConfigError: If the grid has less than `seed_count` points.
    """
    rows, columns = config.seed_grid
    width, height = config.image_width, config.image_height
    if rows > height or columns > width:
        raise SeedGridTooDense(rows, columns, width, height)
    if config.seed_count > rows * columns:
        raise ConfigError(f"a {rows}x{columns} seed grid has no room for {config.seed_count} seeds")
    positions = [
        int((i + 0.5) * height / rows) * width + int((j + 0.5) * width / columns)
        for i in range(rows)
        for j in range(columns)
    ]
    return positions[: config.seed_count]


def border_pixels(width: int, height: int) -> frozenset[int]:
    rows, columns = (0, height - 1), (0, width - 1)
    return frozenset(y * width + x for y in range(height) for x in range(width) if y in rows or x in columns)


def _pairwise(intensity: npt.NDArray[np.float64], scale: int) -> npt.NDArray[np.int64]:
    height, width = intensity.shape
    weights = np.zeros((4, height, width))
    horizontal = SMOOTHNESS_WEIGHT * np.exp(-np.diff(intensity, axis=1) ** 2 / (2 * SMOOTHNESS_SIGMA**2))
    vertical = SMOOTHNESS_WEIGHT * np.exp(-np.diff(intensity, axis=0) ** 2 / (2 * SMOOTHNESS_SIGMA**2))
    # Index order of `Direction`: left, right, up, down.
    weights[0, :, 1:] = horizontal
    weights[1, :, :-1] = horizontal
    weights[2, 1:, :] = vertical
    weights[3, :-1, :] = vertical
    return to_fixed_point(weights, scale)


def problems_for_image(config: BenchConfig, image: SyntheticImage) -> list[SeedProblem]:
    width, height = image.width, image.height
    border = border_pixels(width, height)
    flat = image.intensity.ravel()
    pairwise = _pairwise(image.intensity, config.weight_scale)
    slope = np.ones((height, width), dtype=np.int64)

    problems = []
    for seed in seed_positions(config):
        difference = np.abs(image.intensity - flat[seed])
        problems.append(
            SeedProblem(
                width=width,
                height=height,
                unary_base=to_fixed_point(FOREGROUND_WEIGHT * (1 - difference), config.weight_scale),
                unary_slope=slope,
                sink_base=to_fixed_point(BACKGROUND_WEIGHT * difference, config.weight_scale),
                pairwise=pairwise,
                fg_seeds=frozenset({seed}),
                bg_seeds=border - {seed},
            )
        )
    return problems


def generate_problems(
    config: BenchConfig,
    rng: np.random.Generator,
    image: Optional[SyntheticImage] = None,
) -> list[SeedProblem]:
    """
    Generate one problem per foreground seed of a synthetic image.

    The image is drawn from `rng` unless given.

    Raises:
        SeedGridTooDense: If the seed grid doesn't fit into the image.
    """
    if image is None:
        image = generate_image(config.image_width, config.image_height, rng)
    return problems_for_image(config, image)


def image_rng(config: BenchConfig, index: int) -> np.random.Generator:
    """Every image has its own stream, so images don't depend on each other."""
    return np.random.default_rng([config.rng_seed, index])


def write_problems(
    directory: Path, index: int, image: SyntheticImage, problems: Sequence[SeedProblem]
) -> Path:
    """
    Write the problems of one image as consecutive frames plus a JSON descriptor.

    Returns:
        The path of the binary problem file.
    """
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"image-{index:03d}.bin"
    path.write_bytes(b"".join(encode_problem(problem) for problem in problems))
    descriptor: JsonDict = {
        "schema_version": Reports.SCHEMA_VERSION,
        "image": index,
        "width": image.width,
        "height": image.height,
        "problems": len(problems),
        "fg_seeds": [sorted(problem.fg_seeds) for problem in problems],
        "regions": image.regions.tolist(),
    }
    path.with_suffix(".json").write_text(json.dumps(descriptor, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote {len(problems)} problems to {path}.")
    return path


def read_problems(path: Path) -> list[SeedProblem]:
    problems = []
    with open(path, "rb") as f:
        while (data := read_frame(f, int(settings.SUPERCUT["MAX_FRAME_BYTES"]))) is not None:
            problems.append(decode_problem(data))
    return problems


def generate_files(config: BenchConfig, directory: Path) -> list[Path]:
    """Generate and write the problems of every image of `config`."""
    paths = []
    for index in range(config.images):
        image = generate_image(config.image_width, config.image_height, image_rng(config, index))
        paths.append(write_problems(directory, index, image, problems_for_image(config, image)))
    return paths
