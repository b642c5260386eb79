from __future__ import annotations

import pytest

from supercut.utils.endpoints import parse_endpoint, parse_remote_workers
from supercut.utils.exceptions import ConfigError


def test_parse_endpoint() -> None:
    assert parse_endpoint("10.0.0.2:7070") == ("10.0.0.2", 7070)
    assert parse_endpoint("worker-3.local:0") == ("worker-3.local", 0)
    # IPv6 hosts keep their colons.
    assert parse_endpoint("::1:7070") == ("::1", 7070)


@pytest.mark.parametrize("endpoint", ["", "localhost", ":7070", "localhost:", "localhost:http", "host:65536"])
def test_invalid_endpoints(endpoint: str) -> None:
    with pytest.raises(ConfigError):
        parse_endpoint(endpoint)


def test_parse_remote_workers() -> None:
    assert parse_remote_workers([]) == []
    assert parse_remote_workers(["10.0.0.2:7070*3"]) == [
        {"kind": "remote", "endpoint": "10.0.0.2:7070", "slots": 3}
    ]
    with pytest.raises(ConfigError):
        parse_remote_workers(["10.0.0.2:7070*many"])
    with pytest.raises(ConfigError):
        parse_remote_workers(["10.0.0.2*2"])
