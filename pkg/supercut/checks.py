"""System checks that keep the commands from running on broken `SUPERCUT` settings."""
from __future__ import annotations

from typing import Any, Optional

from django.conf import settings
from django.core.checks import CheckMessage, Error, register

from supercut.parametric import LambdaSchedule
from supercut.utils.constants import Mode, Policy, WorkerKind
from supercut.utils.endpoints import parse_remote_workers
from supercut.utils.exceptions import ConfigError

_COUNTS = (
    "SEEDS_PER_SUPERGRAPH",
    "SEED_COUNT",
    "IMAGE_WIDTH",
    "IMAGE_HEIGHT",
    "IMAGES",
    "WEIGHT_SCALE",
    "SYNTHETIC_WEIGHT_SCALE",
    "MAX_FRAME_BYTES",
    "SOLVER_THREADS",
)


@register("supercut")
def check_schedules(app_configs: Any = None, **kwargs: Any) -> list[CheckMessage]:
    errors: list[CheckMessage] = []
    for key in ("LAMBDA_SCHEDULE", "LAMBDA_SCHEDULE_HALVED"):
        try:
            LambdaSchedule(tuple(settings.SUPERCUT[key]))
        except (ConfigError, TypeError) as exc:
            errors.append(Error(f"SUPERCUT['{key}'] is invalid: {exc}", id="supercut.E001"))
    return errors


@register("supercut")
def check_counts(app_configs: Any = None, **kwargs: Any) -> list[CheckMessage]:
    errors: list[CheckMessage] = []
    for key in _COUNTS:
        value = settings.SUPERCUT[key]
        if not isinstance(value, int) or value < 1:
            message = f"SUPERCUT['{key}'] has to be a positive integer, got {value!r}."
            errors.append(Error(message, id="supercut.E002"))
    grid = settings.SUPERCUT["SEED_GRID"]
    if len(grid) != 2 or not all(isinstance(n, int) and n >= 1 for n in grid):
        message = f"SUPERCUT['SEED_GRID'] has to be two positive integers, got {grid!r}."
        errors.append(Error(message, id="supercut.E002"))
    concurrent = settings.SUPERCUT["MAX_CONCURRENT"]
    if not isinstance(concurrent, int) or concurrent < 2:
        message = f"SUPERCUT['MAX_CONCURRENT'] has to be an integer of at least 2, got {concurrent!r}."
        errors.append(Error(message, id="supercut.E002"))
    timeout = settings.SUPERCUT["RPC_TIMEOUT"]
    if isinstance(timeout, bool) or not isinstance(timeout, (int, float)) or not timeout > 0:
        message = f"SUPERCUT['RPC_TIMEOUT'] has to be a positive number of seconds, got {timeout!r}."
        errors.append(Error(message, id="supercut.E002"))
    return errors


@register("supercut")
def check_choices(app_configs: Any = None, **kwargs: Any) -> list[CheckMessage]:
    errors: list[CheckMessage] = []
    for key, choices in (("POLICY", Policy.RUNNABLE), ("MODE", Mode.ALL)):
        if settings.SUPERCUT[key] not in choices:
            errors.append(
                Error(
                    f"SUPERCUT['{key}'] is {settings.SUPERCUT[key]!r}.",
                    hint=f"Use one of {', '.join(choices)}.",
                    id="supercut.E003",
                )
            )
    return errors


def _worker_error(index: int, worker: Any) -> Optional[str]:
    if not isinstance(worker, dict):
        return f"entry {index} is not a mapping"
    if unknown := set(worker) - {"kind", "endpoint", "slots", "speed"}:
        return f"entry {index} has unknown keys {sorted(unknown)}"
    if worker.get("kind", WorkerKind.LOCAL) == WorkerKind.REMOTE and not worker.get("endpoint"):
        return f"remote entry {index} has no endpoint"
    if not isinstance(worker.get("slots", 1), int) or worker.get("slots", 1) < 1:
        return f"entry {index} needs a positive slot count"
    return None


@register("supercut")
def check_workers(app_configs: Any = None, **kwargs: Any) -> list[CheckMessage]:
    errors: list[CheckMessage] = []
    workers = settings.SUPERCUT["WORKERS"]
    if not workers:
        errors.append(Error("SUPERCUT['WORKERS'] is empty.", id="supercut.E004"))
    for index, worker in enumerate(workers):
        if (message := _worker_error(index, worker)) is not None:
            errors.append(Error(f"SUPERCUT['WORKERS']: {message}.", id="supercut.E004"))
    try:
        parse_remote_workers(settings.SUPERCUT_REMOTE_WORKERS)
    except ConfigError as exc:
        errors.append(Error(f"SUPERCUT_REMOTE_WORKERS is invalid: {exc}", id="supercut.E005"))
    return errors
