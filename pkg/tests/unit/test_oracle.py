"""Tests for the exhaustive oracles and the gradient check."""

import math

import numpy as np
import pytest

from mmassoc.config.settings import settings
from mmassoc.core.errors import SearchSpaceTooLargeError
from mmassoc.core.metrics import saturation_utility
from mmassoc.core.types import ap_of, one_hot
from mmassoc.loadsolve import finite_utility, water_filling
from mmassoc.oracle import (
    candidate_count,
    exhaustive_finite,
    exhaustive_saturation,
    gradient_check,
)
from mmassoc.satsolve import relaxed_gradient, solve_saturation


def test_candidate_count_skips_dead_links():
    rates = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 0.0, 1.0]])
    assert candidate_count(rates) == 6


def test_single_ap_has_one_candidate(frames):
    x, value = exhaustive_saturation(np.full((3, 1), 1e9), frames)
    assert x.sum() == 3
    assert value == pytest.approx(3 * math.log(0.9e9 / 3))


def test_symmetric_saturation_optimum(frames, symmetric_rates):
    x, value = exhaustive_saturation(symmetric_rates, frames)
    assert ap_of(x).tolist() == [0, 1]
    assert value == pytest.approx(2 * math.log(0.9e9))


def test_saturation_value_matches_core_utility(frames, random_rates):
    rates = random_rates[:6]
    x, value = exhaustive_saturation(rates, frames)
    assert value == pytest.approx(saturation_utility(x, rates, frames))


def test_saturation_oracle_bounds_the_solver(frames, random_rates):
    rates = random_rates[:7]
    _, best = exhaustive_saturation(rates, frames)
    _, report = solve_saturation(rates, frames, deterministic=True)
    assert report.utility <= best + 1e-9


def test_guard_raises_before_enumerating(frames, random_rates):
    with pytest.raises(SearchSpaceTooLargeError) as exc:
        exhaustive_saturation(random_rates, frames, max_candidates=100)
    assert exc.value.cardinality == 4**10
    assert exc.value.limit == 100


def test_guard_defaults_to_settings(frames, random_rates, monkeypatch):
    monkeypatch.setattr(settings.oracle, "max_candidates", 10)
    with pytest.raises(SearchSpaceTooLargeError):
        exhaustive_finite(random_rates, frames, np.full(10, 1e9))


def test_small_chunks_give_the_same_optimum(frames, random_rates, monkeypatch):
    rates = random_rates[:6]
    expected = exhaustive_saturation(rates, frames)
    monkeypatch.setattr(settings.oracle, "chunk_size", 7)
    x, value = exhaustive_saturation(rates, frames)
    np.testing.assert_array_equal(x, expected[0])
    assert value == pytest.approx(expected[1])


def test_finite_oracle_with_satisfiable_demands(frames):
    rates = np.array([[2e9, 1e9], [1e9, 2e9], [2e9, 2e9]])
    demand = np.array([0.3e9, 0.3e9, 0.3e9])
    x, t, value = exhaustive_finite(rates, frames, demand)
    assert value == pytest.approx(np.log(demand).sum())
    assert np.all(t[x == 0] == 0)


def test_finite_oracle_airtime_is_water_filled(frames, random_rates, rng):
    rates = random_rates[:6]
    demand = rng.uniform(0.46e9, 2.3e9, size=6)
    x, t, value = exhaustive_finite(rates, frames, demand)
    np.testing.assert_allclose(t, water_filling(x, rates, frames, demand), atol=1e-12)
    assert value == pytest.approx(finite_utility(x, t, rates, frames))


def test_finite_oracle_beats_every_single_move(frames, random_rates, rng):
    rates = random_rates[:5]
    demand = rng.uniform(0.46e9, 2.3e9, size=5)
    x, _, value = exhaustive_finite(rates, frames, demand)
    current = ap_of(x)
    for i in range(5):
        for j in range(4):
            choice = current.copy()
            choice[i] = j
            y = one_hot(choice, 4)
            other = finite_utility(y, water_filling(y, rates, frames, demand), rates, frames)
            assert other <= value + 1e-9


def test_finite_oracle_rejects_bad_demand(frames, symmetric_rates):
    with pytest.raises(ValueError, match="positive"):
        exhaustive_finite(symmetric_rates, frames, np.array([1e9, 0.0]))


def test_gradient_check_on_interior_points(frames, rng):
    rates = rng.uniform(0.7e9, 6.8e9, size=(3, 2))
    for _ in range(10):
        xf = rng.uniform(0.05, 0.45, size=(3, 2))
        assert gradient_check(xf, rates, frames) < 1e-5


def test_gradient_symmetric_point(frames, symmetric_rates):
    grad = relaxed_gradient(np.full((2, 2), 0.5), symmetric_rates, frames)
    assert np.allclose(grad, grad[0, 0])
