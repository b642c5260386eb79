from __future__ import annotations

import dataclasses


@dataclasses.dataclass(frozen=True)
class CallTimeline:
    """Virtual timestamps of one request going through a paced link and a worker."""

    index: int
    sent: float
    received: float
    solve_start: float
    solve_end: float
    answered: float


@dataclasses.dataclass(frozen=True)
class PipelineRun:
    calls: tuple[CallTimeline, ...]

    @property
    def total(self) -> float:
        return max((call.answered for call in self.calls), default=0.0)


def simulate_pipelined_calls(
    transfer: float,
    solve: float,
    count: int,
    max_concurrent: int,
    *,
    answer: float = 0.0,
    solver_threads: int = 1,
) -> PipelineRun:
    """
    Replay the worker protocol on a virtual clock.

    The client streams requests back to back over a link that needs `transfer`
    time units per request. Like `WorkerServer`, the worker reads a request only
    while fewer than `max_concurrent` of its requests are unanswered, solves on
    `solver_threads` threads in arrival order taking `solve` each, and writes one
    answer at a time taking `answer` each.

    The model mirrors `_ConnectionHandler` in `_server.py`: its `gate` semaphore
    (the `max_concurrent` bound on the reader), the shared `solver_threads`
    pool, and the single `_write` thread. A change to either has to go into both.

    With `max_concurrent=1` this degenerates to strictly sequential calls.

    Examples:
        >>> simulate_pipelined_calls(2.0, 3.0, 2, max_concurrent=1).total
        10.0
        >>> simulate_pipelined_calls(2.0, 3.0, 2, max_concurrent=2).total
        8.0
    """
    if max_concurrent < 1 or solver_threads < 1:
        raise ValueError("Need at least one slot and one solver thread.")
    link_free = 0.0
    writer_free = 0.0
    threads = [0.0] * solver_threads
    calls: list[CallTimeline] = []
    for index in range(count):
        sent = link_free
        if index >= max_concurrent:
            # The reader waits until an earlier request has been answered.
            sent = max(sent, calls[index - max_concurrent].answered)
        received = sent + transfer
        link_free = received
        thread = min(range(solver_threads), key=lambda t: (threads[t], t))
        solve_start = max(received, threads[thread])
        solve_end = solve_start + solve
        threads[thread] = solve_end
        answered = max(solve_end, writer_free) + answer
        writer_free = answered
        calls.append(CallTimeline(index, sent, received, solve_start, solve_end, answered))
    return PipelineRun(tuple(calls))
