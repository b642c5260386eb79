from __future__ import annotations

from pathlib import Path

from django.conf import settings

from supercut.harness import load_config


def test_output_goes_to_a_temporary_directory() -> None:
    output_dir = load_config().output_dir
    assert output_dir == Path(settings.SUPERCUT["OUTPUT_DIR"])
    assert output_dir.parent != Path(settings.BASE_DIR)


def test_remote_workers_from_the_environment_are_ignored() -> None:
    """Without `conftest.no_remote_workers_from_env` this would depend on the developer's shell."""
    assert settings.SUPERCUT_REMOTE_WORKERS == []
    assert all(worker.kind == "local" for worker in load_config().workers)
