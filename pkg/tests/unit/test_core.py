"""Tests for domain types and the shared throughput/utility formulas."""

import dataclasses
import math

import numpy as np
import pytest
from pydantic import ValidationError

from mmassoc.core.errors import DegenerateAllocationError, InfeasibleInstanceError
from mmassoc.core.metrics import (
    absolute_airtime,
    cap_to_demand,
    check_finite_load_feasibility,
    diagnostic_utility,
    equal_airtime,
    saturation_utility,
    throughput,
    utility,
)
from mmassoc.core.types import (
    FrameConfig,
    SolveReport,
    ap_of,
    frame_vectors,
    one_hot,
    validate_association,
    validate_fractional,
    validate_rates,
)


def test_frame_efficiency(frames):
    assert frames.efficiency == pytest.approx(0.9)
    assert frames.data_interval_s == pytest.approx(0.09)


def test_frame_overhead_must_fit():
    with pytest.raises(ValidationError):
        FrameConfig(superframe_s=0.1, overhead_s=0.1)


def test_frame_vectors_per_ap():
    h, data = frame_vectors([FrameConfig(), FrameConfig(superframe_s=0.2, overhead_s=0.05)], 2)
    assert h == pytest.approx([0.9, 0.75])
    assert data == pytest.approx([0.09, 0.15])
    with pytest.raises(ValueError, match="expected 3"):
        frame_vectors([FrameConfig()], 3)


def test_validate_rates_names_uncovered_client():
    with pytest.raises(InfeasibleInstanceError) as exc:
        validate_rates([[1e9, 0.0], [0.0, 0.0]])
    assert exc.value.client == 1
    with pytest.raises(ValueError, match="negative"):
        validate_rates([[-1.0, 1.0]])


def test_validate_association_rejects_infeasible_link():
    rates = np.array([[1e9, 0.0], [1e9, 1e9]])
    validate_association(one_hot([0, 1], 2), rates)
    with pytest.raises(ValueError, match="infeasible"):
        validate_association(one_hot([1, 1], 2), rates)
    with pytest.raises(ValueError, match="exactly one"):
        validate_association(np.ones((2, 2)), np.ones((2, 2)))


def test_validate_fractional_row_sums():
    rates = np.ones((1, 2))
    validate_fractional([[0.5, 0.5]], rates)
    with pytest.raises(ValueError, match="row sums"):
        validate_fractional([[0.7, 0.7]], rates)


def test_one_hot_and_ap_of():
    x = one_hot([2, 0, 1], 3)
    assert x.sum() == 3
    assert ap_of(x).tolist() == [2, 0, 1]


def test_equal_airtime_single_ap_three_clients(frames):
    x = one_hot([0, 0, 0], 1)
    t = equal_airtime(x)
    assert t[:, 0] == pytest.approx([1 / 3] * 3)
    # a third of the 90 ms data interval
    assert absolute_airtime(t, frames)[:, 0] == pytest.approx([0.03] * 3)


def test_equal_airtime_single_client():
    assert equal_airtime(one_hot([0], 1))[0, 0] == 1.0


def test_equal_airtime_two_aps():
    t = equal_airtime(one_hot([0, 0, 1], 2))
    assert t.sum(axis=0) == pytest.approx([1.0, 1.0])
    assert t[np.arange(3), [0, 0, 1]] == pytest.approx([0.5, 0.5, 1.0])


def test_throughput_examples(frames):
    x = one_hot([0, 0, 0], 1)
    rates = np.full((3, 1), 1e9)
    assert throughput(x, equal_airtime(x), rates, frames) == pytest.approx([0.3e9] * 3)

    single = one_hot([0], 1)
    assert throughput(single, np.array([[0.25]]), np.array([[2e9]]), frames)[0] == pytest.approx(0.45e9)
    assert throughput(single, np.zeros((1, 1)), np.array([[2e9]]), frames)[0] == 0.0


def test_utility_examples():
    assert utility(np.ones(4)) == 0.0
    assert utility(np.array([2.0, 8.0])) == pytest.approx(math.log(16))


def test_utility_rejects_zero_throughput():
    with pytest.raises(DegenerateAllocationError) as exc:
        utility(np.array([1.0, 0.0, 3.0]))
    assert exc.value.clients == [1]
    assert diagnostic_utility(np.array([1.0, 0.0])) == 0.0


def test_rate_rescale_shifts_utility_by_n_log_c(frames, random_rates):
    x1 = one_hot(np.argmax(random_rates, axis=1), 4)
    x2 = one_hot(np.zeros(10, dtype=int), 4)
    c = 3.7
    base1 = saturation_utility(x1, random_rates, frames)
    base2 = saturation_utility(x2, random_rates, frames)
    scaled1 = saturation_utility(x1, c * random_rates, frames)
    scaled2 = saturation_utility(x2, c * random_rates, frames)
    assert scaled1 - base1 == pytest.approx(10 * math.log(c))
    assert np.sign(scaled1 - scaled2) == np.sign(base1 - base2)


def test_feasibility_report(frames):
    x = one_hot([0, 0], 1)
    rates = np.full((2, 1), 1e9)
    demand = np.array([0.5e9, 0.5e9])

    assert check_finite_load_feasibility(x, np.zeros((2, 1)), rates, frames, demand).feasible

    over = check_finite_load_feasibility(x, np.array([[0.6], [0.6]]), rates, frames, demand)
    assert over.airtime_violations == [0]
    assert over.load_violations == [0, 1]

    split = check_finite_load_feasibility(x, equal_airtime(x), rates, frames, demand)
    assert split.feasible


def test_cap_to_demand_trims_airtime(frames):
    x = one_hot([0, 0], 1)
    rates = np.full((2, 1), 1e9)
    demand = np.array([0.09e9, 2e9])
    t = cap_to_demand(x, equal_airtime(x), rates, frames, demand)
    assert t[:, 0] == pytest.approx([0.1, 0.5])


def test_report_aggregate_is_sum():
    report = SolveReport.from_throughput(np.array([1.0, 2.0, 3.5]), 1.25, iterations=4)
    assert report.aggregate_throughput == 6.5
    assert report.iterations == 4
    assert report.metadata == {}


def test_report_is_a_mutable_dataclass():
    report = SolveReport.from_throughput(np.array([1.0]), 0.0)
    assert dataclasses.is_dataclass(report)
    report.metadata["relaxed_iterations"] = 3
    assert report.metadata == {"relaxed_iterations": 3}
