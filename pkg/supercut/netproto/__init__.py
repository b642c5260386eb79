from __future__ import annotations

from ._client import RemoteWorker, accept_response, call_remote
from ._framing import frame, pack_bits, read_frame, unframe, unpack_bits
from ._messages import (
    WireRequest,
    WireResponse,
    decode_problem,
    decode_request,
    decode_response,
    encode_problem,
    encode_request,
    encode_response,
    request_size,
    wire_layout,
)
from ._pacing import CallTimeline, PipelineRun, simulate_pipelined_calls
from ._server import RequestSolver, WorkerServer, serve, solve_request, start_server

__all__ = [
    "CallTimeline",
    "PipelineRun",
    "RemoteWorker",
    "RequestSolver",
    "WireRequest",
    "WireResponse",
    "WorkerServer",
    "accept_response",
    "call_remote",
    "decode_problem",
    "decode_request",
    "decode_response",
    "encode_problem",
    "encode_request",
    "encode_response",
    "frame",
    "pack_bits",
    "read_frame",
    "request_size",
    "serve",
    "simulate_pipelined_calls",
    "solve_request",
    "start_server",
    "unframe",
    "unpack_bits",
    "wire_layout",
]
