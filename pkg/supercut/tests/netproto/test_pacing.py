from __future__ import annotations

import numpy as np
import pytest

from supercut.netproto import simulate_pipelined_calls


def test_two_calls_overlap() -> None:
    rng = np.random.default_rng(0)
    for __ in range(100):
        transfer, solve = (float(value) for value in rng.uniform(0.1, 10.0, size=2))
        pipelined = simulate_pipelined_calls(transfer, solve, 2, max_concurrent=2)
        sequential = simulate_pipelined_calls(transfer, solve, 2, max_concurrent=1)
        assert sequential.total == pytest.approx(2 * (transfer + solve))
        assert pipelined.total < 2 * (transfer + solve) - 0.5 * min(transfer, solve)


def test_second_request_arrives_before_the_first_answer() -> None:
    first, second = simulate_pipelined_calls(2.0, 3.0, 2, max_concurrent=2).calls
    assert second.received <= first.answered
    assert second.solve_start == first.solve_end


def test_reader_waits_for_a_free_slot() -> None:
    calls = simulate_pipelined_calls(1.0, 4.0, 3, max_concurrent=2).calls
    # The third request can only be read once the first one has been answered.
    assert calls[2].sent == calls[0].answered == 5.0


def test_more_solver_threads() -> None:
    one = simulate_pipelined_calls(1.0, 4.0, 4, max_concurrent=4)
    two = simulate_pipelined_calls(1.0, 4.0, 4, max_concurrent=4, solver_threads=2)
    assert one.total == 17.0
    assert two.total == 10.0


def test_answers_are_written_one_at_a_time() -> None:
    run = simulate_pipelined_calls(1.0, 1.0, 2, max_concurrent=2, answer=5.0, solver_threads=2)
    assert [call.answered for call in run.calls] == [7.0, 12.0]


def test_invalid_arguments() -> None:
    assert simulate_pipelined_calls(1.0, 1.0, 0, max_concurrent=2).total == 0.0
    with pytest.raises(ValueError):
        simulate_pipelined_calls(1.0, 1.0, 2, max_concurrent=0)
