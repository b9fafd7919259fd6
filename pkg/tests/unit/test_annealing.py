"""Tests for bottleneck scoring, perturbation and simulated annealing."""

import numpy as np
import pytest
from pydantic import ValidationError
from structlog.testing import capture_logs

from mmassoc.core.errors import DegenerateAllocationError
from mmassoc.core.types import ap_of, one_hot
from mmassoc.loadsolve import (
    AnnealingTrace,
    SAParams,
    airtime_excess,
    anneal_restarts,
    bottlenecks,
    pack_demands,
    perturbate,
    propose_move,
    simulated_annealing,
    water_filling,
)
from mmassoc.loadsolve.annealing import _energy


def _state(x, rates, frames, demand):
    return x, water_filling(x, rates, frames, demand)


def test_slack_ap_is_minus(frames):
    rates = np.array([[1e9]])
    x, t = _state(one_hot([0], 1), rates, frames, np.array([0.45e9]))
    report = bottlenecks(x, t, rates, frames, np.array([0.45e9]))
    assert report.load[0] == 0.0
    assert report.time[0] == pytest.approx(0.5 * 0.9 * 1e9)
    assert report.minus.tolist() == [0]


def test_oversubscribed_ap_is_plus(frames):
    rates = np.array([[1e9]])
    demand = np.array([1.8e9])
    x, t = _state(one_hot([0], 1), rates, frames, demand)
    report = bottlenecks(x, t, rates, frames, demand)
    assert report.load[0] == pytest.approx(0.9e9)
    assert report.time[0] == 0.0
    assert report.plus.tolist() == [0]


def test_exactly_saturated_ap_is_plus(frames):
    rates = np.array([[1e9]])
    demand = np.array([frames.efficiency * 1e9])
    x, t = _state(one_hot([0], 1), rates, frames, demand)
    report = bottlenecks(x, t, rates, frames, demand)
    assert report.load[0] == 0.0
    assert report.time[0] == 0.0
    assert report.plus.tolist() == [0]


def test_empty_ap_values_slack_at_reachable_clients_mean(frames):
    rates = np.array([[1e9, 2e9], [1e9, 4e9]])
    demand = np.array([0.1e9, 0.1e9])
    x, t = _state(one_hot([0, 0], 2), rates, frames, demand)
    report = bottlenecks(x, t, rates, frames, demand)
    assert report.time[1] == pytest.approx(0.9 * 3e9)


@pytest.fixture
def bottleneck_pair():
    """AP 0 is overloaded; client 1 can also reach the idle AP 1."""
    rates = np.array([[1e9, 0.0], [1e9, 1e9]])
    demand = np.array([0.9e9, 0.9e9])
    x = one_hot([0, 0], 2)
    return x, rates, demand


def test_shared_client_moves_to_slack_ap(frames, bottleneck_pair, rng):
    x, rates, demand = bottleneck_pair
    t = water_filling(x, rates, frames, demand)
    move = propose_move(x, t, demand, 0.0, rates, frames, rng)
    assert move is not None
    assert (move.client, move.source, move.target, move.branch) == (1, 0, 1, "offload")
    assert ap_of(move.apply(x)).tolist() == [0, 1]


def test_p_one_always_uses_random_branch(frames, bottleneck_pair, rng):
    x, rates, demand = bottleneck_pair
    t = water_filling(x, rates, frames, demand)
    for _ in range(20):
        move = propose_move(x, t, demand, 1.0, rates, frames, rng)
        assert move is not None
        assert move.branch == "random"
        assert rates[move.client, move.target] > 0


def test_single_ap_cannot_move(frames, rng):
    rates = np.full((3, 1), 1e9)
    demand = np.full(3, 1e9)
    x, t = _state(one_hot([0, 0, 0], 1), rates, frames, demand)
    assert propose_move(x, t, demand, 0.5, rates, frames, rng) is None
    np.testing.assert_array_equal(perturbate(x, t, demand, 0.5, rates, frames, rng), x)


def test_rebalance_moves_toward_smaller_score(frames, rng):
    rates = np.array([[1e9, 1e9], [1e9, 1e9], [1e9, 1e9]])
    demand = np.full(3, 0.9e9)
    x, t = _state(one_hot([0, 0, 1], 2), rates, frames, demand)
    report = bottlenecks(x, t, rates, frames, demand)
    assert report.minus.size == 0
    move = propose_move(x, t, demand, 0.0, rates, frames, rng)
    assert move is not None
    assert move.branch == "rebalance"
    assert (move.source, move.target) == (0, 1)


def test_sa_params_validation():
    with pytest.raises(ValidationError):
        SAParams(alpha=1.0)
    with pytest.raises(ValidationError):
        SAParams(t0=1.0, t_min=2.0)
    assert SAParams().moves_per_level(10, 4) == 20
    assert SAParams(q=3).moves_per_level(10, 4) == 3


def test_pre_satisfied_start_is_returned_untouched(frames):
    rates = np.array([[2e9, 1e9], [1e9, 2e9]])
    demand = np.array([0.5e9, 0.5e9])
    x0 = one_hot([0, 1], 2)
    x, t, report = simulated_annealing(x0, rates, frames, demand)
    np.testing.assert_array_equal(x, x0)
    assert report.metadata["perturbations"] == 0
    assert report.metadata["temperature_levels"] == 0
    assert report.iterations == 0
    assert report.utility == pytest.approx(np.log(demand).sum())


def test_default_schedule_runs_seven_levels(frames):
    rates = np.full((3, 1), 1e9)
    demand = np.full(3, 1e9)
    _, _, report = simulated_annealing(one_hot([0, 0, 0], 1), rates, frames, demand)
    assert report.metadata["temperature_levels"] == 7
    assert report.metadata["perturbations"] == 7 * 2


def test_annealing_never_returns_worse_than_start(frames, random_rates, rng):
    demand = rng.uniform(0.46e9, 2.3e9, size=10)
    x0 = one_hot(np.argmax(random_rates, axis=1), 4)
    x, t, report = simulated_annealing(x0, random_rates, frames, demand, rng=np.random.default_rng(3))
    assert report.utility >= report.metadata["initial_utility"]
    assert np.all(x.sum(axis=1) == 1)
    assert np.all(t.sum(axis=0) <= 1 + 1e-9)
    assert report.aggregate_throughput == pytest.approx(report.per_client_throughput.sum())


def test_annealing_is_seeded(frames, random_rates, rng):
    demand = rng.uniform(0.46e9, 2.3e9, size=10)
    x0 = one_hot(np.argmax(random_rates, axis=1), 4)
    a = simulated_annealing(x0, random_rates, frames, demand, rng=np.random.default_rng(5))
    b = simulated_annealing(x0, random_rates, frames, demand, rng=np.random.default_rng(5))
    np.testing.assert_array_equal(a[0], b[0])
    assert a[2].utility == b[2].utility


def test_trace_records_every_perturbation(frames, tmp_path):
    rates = np.full((3, 1), 1e9)
    demand = np.full(3, 1e9)
    trace = AnnealingTrace()
    _, _, report = simulated_annealing(one_hot([0, 0, 0], 1), rates, frames, demand, trace=trace)
    frame = trace.to_frame()
    assert list(frame.columns) == ["iteration", "temperature", "utility", "accepted"]
    assert len(frame) == report.metadata["perturbations"]
    assert frame["temperature"].is_monotonic_decreasing
    path = tmp_path / "trace.csv"
    trace.to_csv(path)
    assert path.read_text().startswith("iteration,temperature,utility,accepted")


@pytest.mark.asyncio
async def test_restarts_do_not_depend_on_threads(frames, random_rates, rng):
    demand = rng.uniform(0.46e9, 2.3e9, size=10)
    x0 = one_hot(np.argmax(random_rates, axis=1), 4)
    serial = await anneal_restarts(x0, random_rates, frames, demand, seeds=[1, 2, 3], threads=1)
    parallel = await anneal_restarts(x0, random_rates, frames, demand, seeds=[1, 2, 3], threads=3)
    np.testing.assert_array_equal(serial[0], parallel[0])
    assert serial[2].utility == parallel[2].utility
    assert serial[2].metadata["restarts"] == 3
    assert serial[2].metadata["restart_seed"] in (1, 2, 3)


@pytest.mark.asyncio
async def test_restarts_need_a_seed(frames, random_rates):
    with pytest.raises(ValueError, match="at least one seed"):
        await anneal_restarts(one_hot([0] * 10, 4), random_rates, frames, np.ones(10), seeds=[])


def _swap_instance():
    # airtime each client needs at each AP; only swapping clients 0 and 1 fits both APs
    need = np.array([[0.6, 0.3], [0.3, 0.6], [0.5, np.inf], [np.inf, 0.5]])
    rates = 1e9 / need
    demand = np.full(4, 0.9e9)
    return rates, demand


def test_airtime_excess_counts_oversubscription(frames):
    rates, demand = _swap_instance()
    assert airtime_excess(one_hot([0, 1, 0, 1], 2), rates, frames, demand) == pytest.approx(0.2)
    assert airtime_excess(one_hot([1, 0, 0, 1], 2), rates, frames, demand) == pytest.approx(0.0, abs=1e-12)


def test_pack_demands_finds_the_swap(frames):
    rates, demand = _swap_instance()
    packed = pack_demands(one_hot([0, 1, 0, 1], 2), rates, frames, demand, np.random.default_rng(0), kicks=0)
    assert ap_of(packed).tolist() == [1, 0, 0, 1]
    t = water_filling(packed, rates, frames, demand)
    served = (t * rates * 0.9).sum(axis=1)
    np.testing.assert_allclose(served, demand, rtol=1e-9)


def test_pack_demands_relocates_out_of_a_crowded_ap(frames):
    rates = np.full((3, 2), 1e9)
    demand = np.array([0.6, 0.6, 0.3]) * 0.9e9
    packed = pack_demands(one_hot([0, 0, 0], 2), rates, frames, demand, np.random.default_rng(0))
    assert airtime_excess(packed, rates, frames, demand) == pytest.approx(0.0, abs=1e-12)
    assert np.all(packed.sum(axis=1) == 1)


def test_pack_demands_keeps_a_fitting_association(frames):
    rates, demand = _swap_instance()
    x = one_hot([1, 0, 0, 1], 2)
    np.testing.assert_array_equal(pack_demands(x, rates, frames, demand, np.random.default_rng(0)), x)


@pytest.mark.parametrize(
    ("demand", "n_clients"),
    [
        (1e9, 2),  # one client alone needs more than the interval
        (0.72e9, 3),  # 0.8 each, 2.4 intervals over two APs
    ],
)
def test_pack_demands_leaves_unpackable_instances_alone(frames, demand, n_clients):
    rates = np.full((n_clients, 2), 1e9)
    x = one_hot([0] * n_clients, 2)
    packed = pack_demands(x, rates, frames, np.full(n_clients, demand), np.random.default_rng(0))
    np.testing.assert_array_equal(packed, x)


def test_annealing_packs_when_the_walk_ends_short(frames):
    rates, demand = _swap_instance()
    params = SAParams(t0=0.01, t_min=0.005, q=1, p=0.0)
    x, t, report = simulated_annealing(one_hot([0, 1, 0, 1], 2), rates, frames, demand, params)
    assert report.metadata["packed"] is True
    assert ap_of(x).tolist() == [1, 0, 0, 1]
    assert report.utility == pytest.approx(np.log(demand).sum())


def test_annealing_without_packing_keeps_best_seen(frames):
    rates, demand = _swap_instance()
    params = SAParams(t0=0.01, t_min=0.005, q=1, p=0.0, pack=False)
    _, _, report = simulated_annealing(one_hot([0, 1, 0, 1], 2), rates, frames, demand, params)
    assert report.metadata["packed"] is False
    assert report.utility < np.log(demand).sum()


def test_degenerate_candidate_is_logged_with_clamped_utility(frames):
    rates = np.array([[2e9], [1e9]])
    x = one_hot([0, 0], 1)
    t = np.array([[0.5], [0.0]])
    with capture_logs() as logs, pytest.raises(DegenerateAllocationError):
        _energy(x, t, rates, frames)
    (event,) = [e for e in logs if e["event"] == "degenerate_candidate"]
    assert event["log_level"] == "error"
    assert event["clamped_utility"] == pytest.approx(np.log(0.5 * 0.9 * 2e9))
