from __future__ import annotations

from typing import Any

from django.conf import settings
from django.core.checks import run_checks
from django.test import override_settings


def supercut_errors(**changes: Any) -> list[str]:
    with override_settings(SUPERCUT={**settings.SUPERCUT, **changes}):
        return [message.id for message in run_checks(tags=["supercut"])]


def test_default_settings_pass() -> None:
    assert supercut_errors() == []


def test_invalid_settings() -> None:
    assert supercut_errors(LAMBDA_SCHEDULE=[4, 2]) == ["supercut.E001"]
    assert supercut_errors(SEED_COUNT=0) == ["supercut.E002"]
    assert supercut_errors(SEED_GRID=[3]) == ["supercut.E002"]
    assert supercut_errors(MAX_CONCURRENT=1) == ["supercut.E002"]
    assert supercut_errors(MAX_CONCURRENT="2") == ["supercut.E002"]
    assert supercut_errors(RPC_TIMEOUT=0) == ["supercut.E002"]
    assert supercut_errors(RPC_TIMEOUT="soon") == ["supercut.E002"]
    assert supercut_errors(RPC_TIMEOUT=0.5) == []
    assert supercut_errors(POLICY="lpt") == ["supercut.E003"]
    assert supercut_errors(WORKERS=[]) == ["supercut.E004"]
    assert supercut_errors(WORKERS=[{"kind": "remote"}, {"kind": "local", "cores": 2}]) == [
        "supercut.E004",
        "supercut.E004",
    ]


def test_invalid_remote_workers_from_the_environment() -> None:
    with override_settings(SUPERCUT_REMOTE_WORKERS=["localhost"]):
        assert [message.id for message in run_checks(tags=["supercut"])] == ["supercut.E005"]
