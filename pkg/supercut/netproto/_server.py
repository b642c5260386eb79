from __future__ import annotations

import logging
import queue
import socketserver
import threading
from concurrent.futures import Future, ThreadPoolExecutor, wait
from typing import Callable, Optional

from django.conf import settings

from supercut.graphs import CutResult
from supercut.netproto._framing import read_frame
from supercut.netproto._messages import (
    WireRequest,
    WireResponse,
    decode_request,
    encode_response,
    peek_task_id,
)
from supercut.supergraphs import solve_supergraph
from supercut.utils.constants import Status
from supercut.utils.endpoints import parse_endpoint
from supercut.utils.exceptions import AdmissionError, ConfigError, WireError

logger = logging.getLogger(__name__)

RequestSolver = Callable[[WireRequest], CutResult]


def solve_request(request: WireRequest) -> CutResult:
    return solve_supergraph(request.graph, request.layout)


class WorkerServer(socketserver.ThreadingTCPServer):
    """
    A multi-threaded worker that solves supergraph requests.

    Every connection gets a reader (the handler thread) and a single writer
    thread. The reader keeps decoding requests until `max_concurrent` of them are
    waiting for their response, so the next requests arrive while the earlier ones
    are still being solved. Solves run on a pool shared by all connections and
    responses are written in completion order.
    """

    daemon_threads = True
    allow_reuse_address = True

    def __init__(
        self,
        address: tuple[str, int],
        *,
        solver: RequestSolver = solve_request,
        max_concurrent: int = 2,
        solver_threads: int = 1,
        max_frame_bytes: Optional[int] = None,
    ) -> None:
        if max_concurrent < 2:
            raise ConfigError(f"max_concurrent has to be at least 2, got {max_concurrent}")
        if solver_threads < 1:
            raise ConfigError(f"solver_threads has to be at least 1, got {solver_threads}")
        super().__init__(address, _ConnectionHandler)
        self.solver = solver
        self.max_concurrent = max_concurrent
        self.max_frame_bytes = max_frame_bytes or int(settings.SUPERCUT["MAX_FRAME_BYTES"])
        self.pool = ThreadPoolExecutor(max_workers=solver_threads, thread_name_prefix="supercut-solve")

    @property
    def endpoint(self) -> str:
        host, port = self.server_address[:2]
        return f"{host}:{port}"

    def server_close(self) -> None:
        super().server_close()
        self.pool.shutdown(wait=False)

    def start(self) -> threading.Thread:
        """Serve in a daemon thread, stop with `shutdown()` and `server_close()`."""
        thread = threading.Thread(target=self.serve_forever, name="supercut-worker", daemon=True)
        thread.start()
        logger.info(f"Worker listening on {self.endpoint}.")
        return thread


class _ConnectionHandler(socketserver.StreamRequestHandler):
    server: WorkerServer

    def handle(self) -> None:
        peer = "{}:{}".format(*self.client_address[:2])
        logger.debug(f"Connection from {peer}.")
        gate = threading.Semaphore(self.server.max_concurrent)
        outbox: queue.Queue[Optional[bytes]] = queue.Queue()
        writer = threading.Thread(target=self._write, args=(outbox, gate), daemon=True)
        writer.start()
        solving: list[Future[None]] = []
        try:
            self._read(peer, gate, outbox, solving)
        finally:
            wait(solving)
            outbox.put(None)
            writer.join()
            logger.debug(f"Connection from {peer} closed.")

    def _read(
        self,
        peer: str,
        gate: threading.Semaphore,
        outbox: queue.Queue[Optional[bytes]],
        solving: list[Future[None]],
    ) -> None:
        while True:
            gate.acquire()
            try:
                data = read_frame(self.rfile, self.server.max_frame_bytes)
            except WireError as exc:
                logger.warning(f"Broken frame from {peer}, closing: {exc}")
                outbox.put(encode_response(WireResponse.error(0, exc.status)))
                return
            except OSError:
                gate.release()
                return
            if data is None:
                gate.release()
                return

            try:
                request = decode_request(data)
            except WireError as exc:
                task_id = peek_task_id(data)
                logger.warning(f"Rejected task {task_id} from {peer}: {exc}")
                outbox.put(encode_response(WireResponse.error(task_id, exc.status)))
                if not exc.keeps_framing:
                    return
                continue
            solving.append(self.server.pool.submit(self._solve, request, outbox))

    def _solve(self, request: WireRequest, outbox: queue.Queue[Optional[bytes]]) -> None:
        try:
            response = WireResponse.ok(request.task_id, self.server.solver(request))
        except AdmissionError as exc:
            logger.warning(f"Task {request.task_id} was not admitted: {exc}")
            response = WireResponse.error(request.task_id, Status.ADMISSION_FAILED)
        except Exception:  # pylint: disable=broad-except
            logger.exception(f"Solving task {request.task_id} failed.")
            response = WireResponse.error(request.task_id, Status.SOLVER_ERROR)
        outbox.put(encode_response(response))

    def _write(self, outbox: queue.Queue[Optional[bytes]], gate: threading.Semaphore) -> None:
        broken = False
        while (data := outbox.get()) is not None:
            if not broken:
                try:
                    self.wfile.write(data)
                    self.wfile.flush()
                except OSError:
                    # Keep draining, so that the reader never waits for a slot forever.
                    broken = True
            gate.release()


def start_server(
    endpoint: str,
    *,
    solver: RequestSolver = solve_request,
    max_concurrent: int = 2,
    solver_threads: int = 1,
) -> WorkerServer:
    """Start a worker in the background, port 0 picks a free port."""
    server = WorkerServer(
        parse_endpoint(endpoint),
        solver=solver,
        max_concurrent=max_concurrent,
        solver_threads=solver_threads,
    )
    server.start()
    return server


def serve(
    endpoint: str,
    *,
    solver: RequestSolver = solve_request,
    max_concurrent: int = 2,
    solver_threads: int = 1,
) -> None:
    """Run a worker until interrupted."""
    with WorkerServer(
        parse_endpoint(endpoint),
        solver=solver,
        max_concurrent=max_concurrent,
        solver_threads=solver_threads,
    ) as server:
        logger.info(f"Worker listening on {server.endpoint}.")
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            logger.info("Worker interrupted, shutting down.")
