from __future__ import annotations

import logging
import socket
import threading
from concurrent.futures import Future
from concurrent.futures import TimeoutError as FutureTimeout
from typing import BinaryIO, Optional

from django.conf import settings

from supercut.graphs import CutResult, cut_cost
from supercut.netproto._framing import read_frame
from supercut.netproto._messages import (
    WireRequest,
    WireResponse,
    decode_response,
    encode_request,
)
from supercut.utils.constants import Status
from supercut.utils.endpoints import parse_endpoint
from supercut.utils.exceptions import (
    IntegrityError,
    RemoteStatusError,
    RemoteTimeout,
    TransportError,
    WireError,
)

logger = logging.getLogger(__name__)


def _timeout(timeout: Optional[float]) -> float:
    return float(settings.SUPERCUT["RPC_TIMEOUT"]) if timeout is None else timeout


def accept_response(endpoint: str, request: WireRequest, response: WireResponse) -> CutResult:
    """
    Turn a response into a cut, after making sure it is one.

    Raises:
        TransportError: If the response is for another task.
        RemoteStatusError: If the worker reported an error.
        IntegrityError: If the flow of the response isn't the cost of its labels.
    """
    if response.task_id != request.task_id:
        raise TransportError(
            endpoint, f"got the answer to task {response.task_id} instead of {request.task_id}"
        )
    if response.status != Status.OK:
        raise RemoteStatusError(endpoint, response.task_id, response.status)
    graph = request.graph
    try:
        labels = response.labels(graph.width, graph.height)
    except WireError as exc:
        raise IntegrityError(endpoint, response.flow, exc) from exc
    cost = cut_cost(graph, labels)
    if cost != response.flow:
        raise IntegrityError(endpoint, response.flow, cost)
    return CutResult(flow=response.flow, labels=labels)


def call_remote(endpoint: str, request: WireRequest, *, timeout: Optional[float] = None) -> CutResult:
    """
    Solve a request on a remote worker, over a connection of its own.

    Raises:
        TransportError: If the worker can't be reached or hangs up.
        RemoteTimeout: If there's no answer within `timeout` seconds
            (`settings.SUPERCUT["RPC_TIMEOUT"]` by default).
        RemoteStatusError: If the worker answers with an error status.
        IntegrityError: If the answer doesn't check out.
    """
    seconds = _timeout(timeout)
    try:
        with socket.create_connection(parse_endpoint(endpoint), timeout=seconds) as sock:
            sock.sendall(encode_request(request))
            with sock.makefile("rb") as stream:
                data = read_frame(stream, int(settings.SUPERCUT["MAX_FRAME_BYTES"]))
    except socket.timeout:
        raise RemoteTimeout(endpoint, seconds) from None
    except WireError as exc:
        raise TransportError(endpoint, exc) from exc
    except OSError as exc:
        raise TransportError(endpoint, exc) from exc
    if data is None:
        raise TransportError(endpoint, "the connection was closed without an answer")
    try:
        response = decode_response(data)
    except WireError as exc:
        raise TransportError(endpoint, exc) from exc
    return accept_response(endpoint, request, response)


class _Connection:
    """One socket to a worker, and the requests still waiting for an answer on it."""

    def __init__(self, sock: socket.socket) -> None:
        self.sock = sock
        self.pending: dict[int, tuple[WireRequest, Future[CutResult]]] = {}

    def close(self) -> None:
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self.sock.close()


class RemoteWorker:
    """
    A persistent, pipelined connection to one worker.

    Up to `slots` requests may be outstanding at once; responses are matched to
    their requests by task id, so they may come back in any order. A connection
    that breaks or times out fails only its own requests, the next `submit`
    opens a fresh one.
    """

    def __init__(self, endpoint: str, *, slots: int = 1, timeout: Optional[float] = None) -> None:
        self.endpoint = endpoint
        self.timeout = _timeout(timeout)
        self._slots = threading.BoundedSemaphore(slots)
        self._lock = threading.Lock()
        self._conn: Optional[_Connection] = None

    def __repr__(self) -> str:
        return f"<RemoteWorker:{self.endpoint}>"

    def __enter__(self) -> RemoteWorker:
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    def _connect(self) -> _Connection:
        if self._conn is not None:
            return self._conn
        try:
            sock = socket.create_connection(parse_endpoint(self.endpoint), timeout=self.timeout)
        except socket.timeout:
            raise RemoteTimeout(self.endpoint, self.timeout) from None
        except OSError as exc:
            raise TransportError(self.endpoint, exc) from exc
        # Waiting for an answer is bounded per call, not per read.
        sock.settimeout(None)
        conn = _Connection(sock)
        threading.Thread(
            target=self._read_responses,
            args=(conn, sock.makefile("rb")),
            name=f"supercut-client-{self.endpoint}",
            daemon=True,
        ).start()
        self._conn = conn
        return conn

    def submit(self, request: WireRequest) -> Future[CutResult]:
        self._slots.acquire()
        future: Future[CutResult] = Future()
        future.add_done_callback(lambda __: self._slots.release())
        conn: Optional[_Connection] = None
        try:
            with self._lock:
                conn = self._connect()
                if request.task_id in conn.pending:
                    raise ValueError(f"Task {request.task_id} is already outstanding.")
                conn.pending[request.task_id] = (request, future)
                conn.sock.sendall(encode_request(request))
        except OSError as exc:
            assert conn is not None
            self._drop(conn, TransportError(self.endpoint, exc))
        except Exception as exc:  # pylint: disable=broad-except
            future.set_exception(exc)
        return future

    def call(self, request: WireRequest) -> CutResult:
        future = self.submit(request)
        try:
            return future.result(timeout=self.timeout)
        except FutureTimeout:
            # The connection can't be trusted anymore, the answer may still come.
            self.close()
            raise RemoteTimeout(self.endpoint, self.timeout) from None

    def close(self) -> None:
        with self._lock:
            conn = self._conn
        if conn is not None:
            self._drop(conn, TransportError(self.endpoint, "the connection was closed"))

    def _drop(self, conn: _Connection, error: Exception) -> None:
        """Close `conn` and fail its outstanding requests, leaving any newer connection alone."""
        with self._lock:
            if self._conn is conn:
                self._conn = None
            pending, conn.pending = conn.pending, {}
        conn.close()
        for __, future in pending.values():
            if not future.done():
                future.set_exception(error)

    def _read_responses(self, conn: _Connection, stream: BinaryIO) -> None:
        max_bytes = int(settings.SUPERCUT["MAX_FRAME_BYTES"])
        error = TransportError(self.endpoint, "the worker hung up")
        try:
            while (data := read_frame(stream, max_bytes)) is not None:
                response = decode_response(data)
                with self._lock:
                    entry = conn.pending.pop(response.task_id, None)
                if entry is None:
                    logger.warning(f"{self} answered unknown task {response.task_id}.")
                    continue
                request, future = entry
                try:
                    future.set_result(accept_response(self.endpoint, request, response))
                except Exception as exc:  # pylint: disable=broad-except
                    future.set_exception(exc)
        except (OSError, WireError) as exc:
            error = TransportError(self.endpoint, exc)
        finally:
            stream.close()
        self._drop(conn, error)
