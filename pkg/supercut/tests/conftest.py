from __future__ import annotations

import random
import shutil
import tempfile
from collections.abc import Generator

import numpy as np
from django.conf import settings
from django.test import override_settings
from pytest import fixture

from supercut.netproto import WorkerServer, start_server


@fixture(scope="session", autouse=True)
def seed_random_generator() -> Generator[None, None, None]:
    """Make sure that random numbers generated during tests are always predictable."""
    random.seed(0)
    yield


@fixture(scope="session", autouse=True)
def temp_output() -> Generator[None, None, None]:
    """Write all reports and problem files into a temporary folder."""
    temp_output_dir = tempfile.mkdtemp()
    with override_settings(SUPERCUT={**settings.SUPERCUT, "OUTPUT_DIR": temp_output_dir}):
        yield
    shutil.rmtree(temp_output_dir, ignore_errors=True)


@fixture(scope="session", autouse=True)
def no_remote_workers_from_env() -> Generator[None, None, None]:
    """A developer's `SUPERCUT_REMOTE_WORKERS` must not leak into the tests."""
    with override_settings(SUPERCUT_REMOTE_WORKERS=[]):
        yield


@fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@fixture
def loopback_worker() -> Generator[WorkerServer, None, None]:
    """A worker listening on a free port of the loopback interface."""
    server = start_server("127.0.0.1:0")
    yield server
    server.shutdown()
    server.server_close()


@fixture
def loopback_workers() -> Generator[list[WorkerServer], None, None]:
    servers = [start_server("127.0.0.1:0") for __ in range(2)]
    yield servers
    for server in servers:
        server.shutdown()
        server.server_close()
