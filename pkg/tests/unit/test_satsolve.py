"""Tests for the relaxed saturation program, its solver and rounding."""

import math

import numpy as np
import pytest

from mmassoc.core.metrics import saturation_utility
from mmassoc.core.types import ap_of, one_hot
from mmassoc.satsolve import (
    RelaxedSolverParams,
    iterative_rounding,
    project_capped_simplex,
    relaxed_gradient,
    relaxed_utility,
    round_iterative,
    round_ml,
    solve_relaxed,
    solve_saturation,
)


def _random_point(rng: np.random.Generator, mask: np.ndarray) -> np.ndarray:
    """A random point of the feasible polytope (rows sum to at most 1)."""
    raw = rng.random(mask.shape) * mask
    return raw / np.maximum(raw.sum(axis=1, keepdims=True), 1.0) * rng.random((mask.shape[0], 1))


def test_integer_point_matches_equal_airtime_utility(frames, random_rates):
    x = one_hot(np.argmax(random_rates, axis=1), 4)
    assert relaxed_utility(x, random_rates, frames) == pytest.approx(
        saturation_utility(x, random_rates, frames)
    )


def test_symmetric_half_split(frames, symmetric_rates):
    x = np.full((2, 2), 0.5)
    assert relaxed_utility(x, symmetric_rates, frames) == pytest.approx(2 * math.log(0.9e9))


def test_relaxed_utility_is_concave(frames, rng):
    rates = rng.uniform(0.7e9, 6.8e9, size=(5, 3))
    rates[0, 2] = 0.0
    mask = rates > 0
    for _ in range(100):
        a = _random_point(rng, mask)
        b = _random_point(rng, mask)
        w = rng.random()
        mid = w * a + (1 - w) * b
        lower = w * relaxed_utility(a, rates, frames) + (1 - w) * relaxed_utility(b, rates, frames)
        assert relaxed_utility(mid, rates, frames) >= lower - 1e-9


def test_gradient_is_zero_off_feasible_links(frames):
    rates = np.array([[1e9, 0.0], [2e9, 3e9]])
    grad = relaxed_gradient(np.array([[1.0, 0.0], [0.5, 0.5]]), rates, frames)
    assert grad[0, 1] == 0.0
    assert grad[1, 1] > grad[1, 0]


def test_projection_stays_feasible(rng):
    mask = rng.random((50, 4)) > 0.3
    mask[:, 0] = True
    v = rng.normal(scale=2.0, size=(50, 4))
    p = project_capped_simplex(v, mask)
    assert np.all(p >= 0)
    assert np.all(p[~mask] == 0)
    assert np.all(p.sum(axis=1) <= 1 + 1e-12)
    np.testing.assert_allclose(project_capped_simplex(p, mask), p, atol=1e-12)


def test_projection_is_the_nearest_point(rng):
    mask = np.ones((1, 4), dtype=bool)
    for _ in range(200):
        v = rng.normal(scale=1.5, size=(1, 4))
        p = project_capped_simplex(v, mask)
        y = _random_point(rng, mask)
        # variational inequality of a Euclidean projection onto a convex set
        assert float(np.sum((v - p) * (y - p))) <= 1e-9


def test_projection_of_heavy_row_sums_to_one():
    p = project_capped_simplex(np.array([[0.9, 0.8, -0.2]]), np.ones((1, 3), dtype=bool))
    assert p.sum() == pytest.approx(1.0)
    assert p[0].tolist() == pytest.approx([0.55, 0.45, 0.0])


def test_single_ap_forces_full_association(frames):
    solution = solve_relaxed(np.full((3, 1), 2e9), frames)
    np.testing.assert_allclose(solution.x, np.ones((3, 1)))
    assert solution.converged


def test_symmetric_optimum(frames, symmetric_rates):
    solution = solve_relaxed(symmetric_rates, frames)
    assert solution.utility == pytest.approx(2 * math.log(0.9e9), abs=1e-6)
    np.testing.assert_allclose(solution.x.sum(axis=1), 1.0)


def test_matches_grid_search(frames):
    rates = np.random.default_rng(99).uniform(0.7e9, 6.8e9, size=(3, 2))
    grid = np.linspace(0.0, 1.0, 51)
    a, b, c = np.meshgrid(grid, grid, grid, indexing="ij")
    share = np.stack([a.ravel(), b.ravel(), c.ravel()], axis=1)
    log_cap = np.log(0.9 * rates)
    first = share
    second = 1.0 - share
    load0 = first.sum(axis=1)
    load1 = second.sum(axis=1)

    def spread(load: np.ndarray) -> np.ndarray:
        return np.where(load > 0, load * np.log(np.where(load > 0, load, 1.0)), 0.0)

    values = first @ log_cap[:, 0] + second @ log_cap[:, 1] - spread(load0) - spread(load1)
    solution = solve_relaxed(rates, frames)
    assert solution.utility == pytest.approx(values.max(), abs=1e-3)


def test_non_convergence_returns_last_iterate(frames, random_rates):
    solution = solve_relaxed(random_rates, frames, RelaxedSolverParams(max_iters=1))
    assert solution.iterations == 1
    assert not solution.converged
    np.testing.assert_allclose(solution.x.sum(axis=1), 1.0)


def test_trace_is_non_decreasing(frames, random_rates):
    trace = solve_relaxed(random_rates, frames).trace
    assert all(b >= a for a, b in zip(trace, trace[1:], strict=False))


def test_round_ml_examples():
    assert ap_of(round_ml(np.array([[0.6, 0.4]]))).tolist() == [0]
    assert ap_of(round_ml(np.array([[0.5, 0.5]]))).tolist() == [0]
    x = one_hot([1, 0, 2], 3)
    np.testing.assert_array_equal(round_ml(x), x)


def test_round_ml_skips_infeasible_links():
    rates = np.array([[0.0, 1e9]])
    assert ap_of(round_ml(np.array([[0.9, 0.1]]), rates)).tolist() == [1]


def test_iterative_rounding_hand_trace():
    xf = np.array([[0.6, 0.4], [0.4, 0.6]])
    x, steps = iterative_rounding(xf, np.ones((2, 2)), deterministic=True)
    assert ap_of(x).tolist() == [0, 1]
    assert steps == 2


def test_iterative_rounding_single_ap():
    x, steps = iterative_rounding(np.ones((4, 1)), np.ones((4, 1)))
    assert x.sum() == 4
    assert steps == 4


def test_iterative_rounding_keeps_integer_input(rng):
    x = one_hot([2, 0, 1, 1], 3)
    np.testing.assert_array_equal(round_iterative(x, np.ones((4, 3)), rng=rng), x)


def test_random_tie_break_is_still_valid(rng):
    rates = np.ones((4, 2))
    for _ in range(20):
        x, steps = iterative_rounding(np.full((4, 2), 0.5), rates, rng=rng)
        assert np.all(x.sum(axis=1) == 1)
        assert steps == 4


def test_iterative_rounding_respects_infeasible_links():
    rates = np.array([[1e9, 0.0], [1e9, 1e9], [0.0, 1e9]])
    xf = np.array([[1.0, 0.0], [0.5, 0.5], [0.0, 1.0]])
    x = round_iterative(xf, rates, deterministic=True)
    assert np.all(rates[x == 1] > 0)


def test_solve_saturation_symmetric(frames, symmetric_rates):
    x, report = solve_saturation(symmetric_rates, frames, deterministic=True)
    assert x.sum(axis=0).tolist() == [1.0, 1.0]
    assert report.utility == pytest.approx(2 * math.log(0.9e9))
    assert report.aggregate_throughput == pytest.approx(1.8e9)
    assert report.metadata["rounding_steps"] == 2


def test_solve_saturation_is_seeded(frames, random_rates):
    params = RelaxedSolverParams(jitter=0.05)
    a, _ = solve_saturation(random_rates, frames, params, rng=np.random.default_rng(8))
    b, _ = solve_saturation(random_rates, frames, params, rng=np.random.default_rng(8))
    np.testing.assert_array_equal(a, b)
