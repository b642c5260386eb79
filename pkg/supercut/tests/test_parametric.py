from __future__ import annotations

import numpy as np
import pytest

from supercut.graphs import maxflow_pushrelabel, maxflow_reference
from supercut.harness import brute_force_min_cut, random_problem
from supercut.parametric import (
    LambdaSchedule,
    SeedProblem,
    check_monotone_flows,
    check_nested,
    energy,
    instantiate,
    solve_schedule_sequential,
    to_fixed_point,
)
from supercut.utils.constants import CAP_MAX, OVERFLOW_LIMIT, Direction
from supercut.utils.exceptions import (
    ConfigError,
    InstantiationOverflow,
    InvalidSeeds,
    NegativeCapacity,
    ShapeMismatch,
)


def two_pixel_problem(**changes: object) -> SeedProblem:
    pairwise = np.zeros((4, 1, 2), dtype=np.int64)
    pairwise[Direction.RIGHT, 0, 0] = 1
    pairwise[Direction.LEFT, 0, 1] = 1
    fields: dict[str, object] = {
        "width": 2,
        "height": 1,
        "unary_base": [1, 0],
        "unary_slope": [2, 0],
        "sink_base": [0, 4],
        "pairwise": pairwise,
    }
    fields.update(changes)
    return SeedProblem(**fields)  # type: ignore[arg-type]


def test_schedule_validation() -> None:
    assert LambdaSchedule((1, 2, 4)).values == (1, 2, 4)
    assert LambdaSchedule([0, 5]).values == (0, 5)  # type: ignore[arg-type]
    with pytest.raises(ConfigError):
        LambdaSchedule(())
    with pytest.raises(ConfigError):
        LambdaSchedule((-1, 2))
    with pytest.raises(ConfigError):
        LambdaSchedule((4, 2))


def test_default_schedules() -> None:
    default = LambdaSchedule.default()
    assert len(default) == 20
    assert default[0] == 1 and default[-1] == 1024
    assert len(LambdaSchedule.halved()) == 10
    # Mid-schedule representative of an even length schedule.
    assert default.representative_index == 9
    assert LambdaSchedule((5,)).representative == 5


def test_problem_validation() -> None:
    with pytest.raises(NegativeCapacity):
        two_pixel_problem(unary_slope=[-1, 0])
    with pytest.raises(InvalidSeeds):
        two_pixel_problem(fg_seeds={0}, bg_seeds={0})
    with pytest.raises(InvalidSeeds):
        two_pixel_problem(bg_seeds={2})
    with pytest.raises(ShapeMismatch):
        two_pixel_problem(unary_base=[1, 0, 0])

    problem = two_pixel_problem(fg_seeds={0}, bg_seeds={1})
    assert problem.is_well_posed
    assert not two_pixel_problem().is_well_posed
    assert problem == two_pixel_problem(fg_seeds=[0], bg_seeds=[1])
    assert problem != two_pixel_problem()


def test_instantiate() -> None:
    problem = two_pixel_problem()
    graph = instantiate(problem, 3)
    assert graph.src_cap.ravel().tolist() == [7, 0]
    assert graph.snk_cap.ravel().tolist() == [0, 4]
    assert np.array_equal(graph.nbr_cap, problem.pairwise)
    assert maxflow_pushrelabel(graph).flow == brute_force_min_cut(graph) == 1

    assert instantiate(problem, 0).src_cap.ravel().tolist() == [1, 0]


def test_instantiate_seeds() -> None:
    graph = instantiate(two_pixel_problem(fg_seeds={0}, bg_seeds={1}), 3)
    assert graph.src_cap.ravel().tolist() == [CAP_MAX, 0]
    assert graph.snk_cap.ravel().tolist() == [0, CAP_MAX]


def test_instantiate_constant_family() -> None:
    problem = two_pixel_problem(unary_slope=[0, 0])
    assert instantiate(problem, 1) == instantiate(problem, 1000)


def test_instantiate_overflow() -> None:
    with pytest.raises(InstantiationOverflow) as error:
        instantiate(two_pixel_problem(unary_slope=[0, CAP_MAX // 2]), 2)
    assert error.value.pixel == 1
    assert error.value.lam == 2
    with pytest.raises(InstantiationOverflow):
        instantiate(two_pixel_problem(unary_slope=[OVERFLOW_LIMIT, 0]), 2)
    # Seeds are clamped anyway.
    instantiate(two_pixel_problem(unary_slope=[CAP_MAX, 0], fg_seeds={0}), 2)
    with pytest.raises(ValueError):
        instantiate(two_pixel_problem(), -1)


def test_solve_schedule_sequential() -> None:
    problem = random_problem(np.random.default_rng(3), 4, 4)
    schedule = LambdaSchedule((1, 2, 4, 8, 16))
    result = solve_schedule_sequential(problem, schedule)
    assert len(result.cuts) == 5
    for lam, cut in zip(schedule, result.cuts):
        assert cut == maxflow_pushrelabel(instantiate(problem, lam))

    single = solve_schedule_sequential(problem, LambdaSchedule((4,)))
    assert single.cuts == (maxflow_pushrelabel(instantiate(problem, 4)),)


def test_solve_schedule_sequential_constant_family() -> None:
    problem = two_pixel_problem(unary_slope=[0, 0])
    result = solve_schedule_sequential(problem, LambdaSchedule((1, 10, 100)))
    first = result.foregrounds[0]
    assert all(np.array_equal(mask, first) for mask in result.foregrounds)
    assert check_nested(result)


def test_seeds_are_respected() -> None:
    rng = np.random.default_rng(4)
    for __ in range(20):
        problem = random_problem(rng, 5, 5)
        for cut in solve_schedule_sequential(problem, LambdaSchedule((1, 16, 256))).cuts:
            labels = cut.labels.ravel()
            assert all(labels[p] == 1 for p in problem.fg_seeds)
            assert all(labels[p] == 0 for p in problem.bg_seeds)


def test_nested_and_monotone() -> None:
    rng = np.random.default_rng(5)
    schedule = LambdaSchedule.default()
    for __ in range(100):
        problem = random_problem(rng, 8, 8)
        result = solve_schedule_sequential(problem, schedule)
        assert check_nested(result)
        assert check_monotone_flows(result)


def test_nested_with_the_reference_solver() -> None:
    rng = np.random.default_rng(6)
    schedule = LambdaSchedule((1, 2, 4, 8, 16))
    for __ in range(20):
        problem = random_problem(rng, 4, 4)
        ours = solve_schedule_sequential(problem, schedule)
        reference = solve_schedule_sequential(problem, schedule, solver=maxflow_reference)
        assert ours.cuts == reference.cuts


def test_check_nested_violation() -> None:
    masks = [np.array([1, 0, 0]), np.array([0, 0, 0]), np.array([1, 1, 1])]
    check = check_nested(masks)
    assert not check
    assert check.violation == 1
    assert check_nested([]).holds


def test_check_monotone_flows() -> None:
    assert check_monotone_flows([1, 1, 2])
    assert check_monotone_flows([1, 3, 2]).violation == 2


def test_energy() -> None:
    problem = two_pixel_problem()
    assert energy(problem, 3, [0, 0]) == 7
    cut = maxflow_pushrelabel(instantiate(problem, 3))
    assert energy(problem, 3, cut.labels) == cut.flow

    rng = np.random.default_rng(8)
    problem = random_problem(rng, 4, 4)
    cut = maxflow_pushrelabel(instantiate(problem, 16))
    assert energy(problem, 16, cut.labels) == cut.flow
    for __ in range(200):
        labels = rng.integers(0, 1, size=16, endpoint=True)
        assert energy(problem, 16, labels) >= cut.flow


def test_to_fixed_point() -> None:
    assert to_fixed_point([0.5, 1.0], scale=2).tolist() == [1, 2]
    assert to_fixed_point([1.0]).tolist() == [2**16]
    assert to_fixed_point([[0.25]], scale=2).tolist() == [[1]]
