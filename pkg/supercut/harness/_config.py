from __future__ import annotations

import dataclasses
import logging
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Optional, Union

import yaml
from django.conf import settings

from supercut.parametric import LambdaSchedule
from supercut.scheduling import WorkerHandle
from supercut.types import JsonDict
from supercut.utils.constants import Mode, Policy, WorkerKind
from supercut.utils.endpoints import parse_remote_workers
from supercut.utils.exceptions import ConfigError

logger = logging.getLogger(__name__)

# Config file keys mapped to their `settings.SUPERCUT` defaults.
_DEFAULTS = {
    "image_width": "IMAGE_WIDTH",
    "image_height": "IMAGE_HEIGHT",
    "images": "IMAGES",
    "seed_grid": "SEED_GRID",
    "seed_count": "SEED_COUNT",
    "lambda_schedule": "LAMBDA_SCHEDULE",
    "seeds_per_supergraph": "SEEDS_PER_SUPERGRAPH",
    "workers": "WORKERS",
    "policy": "POLICY",
    "mode": "MODE",
    "use_swap": "USE_SWAP",
    "pad_heights": "PAD_HEIGHTS",
    "rng_seed": "RNG_SEED",
    "output_dir": "OUTPUT_DIR",
    "rpc_timeout": "RPC_TIMEOUT",
    "weight_scale": "SYNTHETIC_WEIGHT_SCALE",
}


@dataclasses.dataclass(frozen=True)
class BenchConfig:
    """
    Everything a benchmark run depends on.

    Attributes:
        image_width: Pixels per row of the synthetic images.
        image_height: Rows of the synthetic images.
        images: How many images to generate and segment.
        seed_grid: (rows, columns) of the regular foreground seed grid.
        seed_count: How many of the grid's seeds to use, in row-major order.
        schedule: The lambda values solved for every seed.
        seeds_per_supergraph: How many seed problems get joined into one task.
        workers: Where the tasks run.
        policy: `Policy.STATIC` or `Policy.DYNAMIC`.
        mode: `Mode.SUPERGRAPH`, or `Mode.BATCH` for one task per seed and lambda.
        use_swap: Whether the s-t swap heuristic is applied.
        pad_heights: Passed on to `join`.
        rng_seed: Makes every generated artifact reproducible.
        output_dir: Where the reports and problem files go.
        rpc_timeout: Seconds to wait for a remote worker.
        weight_scale: Fixed-point scale of the synthetic weights.
    """

    image_width: int
    image_height: int
    images: int
    seed_grid: tuple[int, int]
    seed_count: int
    schedule: LambdaSchedule
    seeds_per_supergraph: int
    workers: tuple[WorkerHandle, ...]
    policy: str
    mode: str
    use_swap: bool
    pad_heights: bool
    rng_seed: int
    output_dir: Path
    rpc_timeout: float
    weight_scale: int

    def __post_init__(self) -> None:
        for name in (
            "image_width",
            "image_height",
            "images",
            "seed_count",
            "seeds_per_supergraph",
            "weight_scale",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"`{name}` has to be at least 1, got {getattr(self, name)}")
        if len(self.seed_grid) != 2 or min(self.seed_grid) < 1:
            raise ConfigError(f"`seed_grid` has to be two positive numbers, got {self.seed_grid}")
        if not self.workers:
            raise ConfigError("at least one worker is needed")
        if self.policy not in Policy.RUNNABLE:
            raise ConfigError(f"unknown policy `{self.policy}`, use one of {Policy.RUNNABLE}")
        if self.mode not in Mode.ALL:
            raise ConfigError(f"unknown mode `{self.mode}`, use one of {Mode.ALL}")

    @property
    def label(self) -> str:
        size = f"{self.image_width}x{self.image_height}"
        return f"{size}-s{self.seed_count}-l{len(self.schedule)}-k{self.seeds_per_supergraph}"

    @property
    def total_slots(self) -> int:
        return sum(worker.slots for worker in self.workers)

    def replace(self, **changes: Any) -> BenchConfig:
        return dataclasses.replace(self, **changes)


def build_workers(entries: Any) -> tuple[WorkerHandle, ...]:
    """Turn worker dicts into handles, remote ones from the environment replace the configured ones."""
    if not isinstance(entries, list) or not all(isinstance(entry, Mapping) for entry in entries):
        raise ConfigError("`workers` has to be a list of mappings")
    if settings.SUPERCUT_REMOTE_WORKERS:
        remote = parse_remote_workers(settings.SUPERCUT_REMOTE_WORKERS)
        logger.info(f"Using {len(remote)} remote workers from the environment.")
        entries = [entry for entry in entries if entry.get("kind") != WorkerKind.REMOTE] + remote

    workers = []
    for index, entry in enumerate(entries):
        unknown = set(entry) - {"kind", "endpoint", "slots", "speed"}
        if unknown:
            raise ConfigError(f"unknown worker keys {sorted(unknown)}")
        try:
            workers.append(WorkerHandle(id=index, **entry))
        except TypeError as exc:
            raise ConfigError(f"worker {index}: {exc}") from exc
    return tuple(workers)


def config_from_mapping(data: Mapping[str, Any]) -> BenchConfig:
    """
    Build a config from file contents, falling back to `settings.SUPERCUT`.

    Raises:
        ConfigError: On unknown keys or invalid values.
    """
    unknown = set(data) - set(_DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")
    values: JsonDict = {key: data.get(key, settings.SUPERCUT[default]) for key, default in _DEFAULTS.items()}

    schedule = values.pop("lambda_schedule")
    if schedule == "default":
        schedule = settings.SUPERCUT["LAMBDA_SCHEDULE"]
    elif schedule == "halved":
        schedule = settings.SUPERCUT["LAMBDA_SCHEDULE_HALVED"]
    try:
        return BenchConfig(
            image_width=int(values["image_width"]),
            image_height=int(values["image_height"]),
            images=int(values["images"]),
            seed_grid=(int(values["seed_grid"][0]), int(values["seed_grid"][1])),
            seed_count=int(values["seed_count"]),
            schedule=LambdaSchedule(tuple(schedule)),
            seeds_per_supergraph=int(values["seeds_per_supergraph"]),
            workers=build_workers(values["workers"]),
            policy=str(values["policy"]),
            mode=str(values["mode"]),
            use_swap=bool(values["use_swap"]),
            pad_heights=bool(values["pad_heights"]),
            rng_seed=int(values["rng_seed"]),
            output_dir=Path(values["output_dir"]),
            rpc_timeout=float(values["rpc_timeout"]),
            weight_scale=int(values["weight_scale"]),
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: Optional[Union[str, Path]] = None) -> BenchConfig:
    """
    Load a YAML benchmark config, or the defaults when there's no path.

    Raises:
        ConfigError: If the file can't be read or isn't a valid config.
    """
    if path is None:
        return config_from_mapping({})
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as exc:
        raise ConfigError(f"can't read `{path}`: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"`{path}` is not valid YAML: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, Mapping):
        raise ConfigError(f"`{path}` has to contain a mapping")
    logger.debug(f"Loaded benchmark config from {path}.")
    return config_from_mapping(data)
