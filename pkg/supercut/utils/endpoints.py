from __future__ import annotations

from collections.abc import Iterable

from supercut.types import JsonDict
from supercut.utils.constants import WorkerKind
from supercut.utils.exceptions import ConfigError


def parse_endpoint(endpoint: str) -> tuple[str, int]:
    """
    Split a `host:port` endpoint.

    Examples:
        >>> parse_endpoint("127.0.0.1:7070")
        ('127.0.0.1', 7070)
        >>> parse_endpoint("localhost")
        Traceback (most recent call last):
        ...
        supercut.utils.exceptions.ConfigError: Invalid configuration: endpoint `localhost` is not of the form host:port
    """
    host, sep, port = endpoint.rpartition(":")
    if not sep or not host or not port.isdigit() or not 0 <= int(port) <= 65535:
        raise ConfigError(f"endpoint `{endpoint}` is not of the form host:port")
    return host, int(port)


def parse_remote_workers(entries: Iterable[str]) -> list[JsonDict]:
    """
    Parse `host:port[*slots]` entries into remote worker dicts.

    Examples:
        >>> workers = parse_remote_workers(["10.0.0.2:7070*2", "10.0.0.3:7070"])
        >>> [(w["endpoint"], w["slots"]) for w in workers]
        [('10.0.0.2:7070', 2), ('10.0.0.3:7070', 1)]
    """
    workers = []
    for entry in entries:
        endpoint, __, slots = entry.partition("*")
        parse_endpoint(endpoint)
        if slots and not slots.isdigit():
            raise ConfigError(f"slot count `{slots}` of `{entry}` is not a number")
        workers.append({"kind": WorkerKind.REMOTE, "endpoint": endpoint, "slots": int(slots or 1)})
    return workers
