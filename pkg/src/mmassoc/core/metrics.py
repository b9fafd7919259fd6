"""Throughput, utility and feasibility formulas shared by every solver."""

from dataclasses import dataclass, field

import numpy as np

from mmassoc.core.errors import DegenerateAllocationError
from mmassoc.core.types import (
    TOL,
    AirtimeAllocation,
    Association,
    FloatArray,
    Frames,
    RateMatrix,
    efficiencies,
    frame_vectors,
)


def equal_airtime(x: Association, frames: Frames | None = None) -> AirtimeAllocation:
    """Split every AP's data interval equally among its clients.

    ``frames`` is accepted for symmetry with the other allocators; fractions do
    not depend on T_j.
    """
    load = x.sum(axis=0)
    share = np.divide(1.0, load, out=np.zeros_like(load), where=load > 0)
    return x * share[np.newaxis, :]


def throughput(
    x: Association,
    t: AirtimeAllocation,
    rates: RateMatrix,
    frames: Frames,
) -> FloatArray:
    """Per-client throughput S_i = t_ij * h_j * r_ij on the associated AP."""
    h = efficiencies(frames, rates.shape[1])
    return np.sum(x * t * h[np.newaxis, :] * rates, axis=1)


def utility(per_client: FloatArray) -> float:
    """Sum of natural-log throughputs."""
    s = np.asarray(per_client, dtype=np.float64)
    bad = np.flatnonzero(~(s > 0))
    if bad.size:
        raise DegenerateAllocationError(bad.tolist())
    return float(np.sum(np.log(s)))


def diagnostic_utility(per_client: FloatArray) -> float:
    """Utility with throughputs clamped at 1 bit/s, for display only."""
    return float(np.sum(np.log(np.maximum(per_client, 1.0))))


def saturation_utility(x: Association, rates: RateMatrix, frames: Frames) -> float:
    """Equal-airtime utility of an integer association."""
    return utility(throughput(x, equal_airtime(x), rates, frames))


def absolute_airtime(t: AirtimeAllocation, frames: Frames) -> FloatArray:
    """Convert data-interval fractions into seconds per beacon interval."""
    _, data = frame_vectors(frames, t.shape[1])
    return t * data[np.newaxis, :]


def required_airtime_matrix(rates: RateMatrix, frames: Frames, demand: FloatArray) -> FloatArray:
    """lambda_i / (h_j r_ij) for every link; inf where the link is infeasible."""
    h = efficiencies(frames, rates.shape[1])
    capacity = rates * h[np.newaxis, :]
    with np.errstate(divide="ignore"):
        return np.where(capacity > 0, demand[:, np.newaxis] / capacity, np.inf)


def cap_to_demand(
    x: Association,
    t: AirtimeAllocation,
    rates: RateMatrix,
    frames: Frames,
    demand: FloatArray,
) -> AirtimeAllocation:
    """Trim airtime so that no client is served above its offered load."""
    need = required_airtime_matrix(rates, frames, demand)
    return np.where(x > 0, np.minimum(t, need), 0.0)


def satisfied(served: FloatArray, demand: FloatArray, tol: float = TOL) -> FloatArray:
    """Boolean mask of clients whose demand is met (relative tolerance)."""
    return np.asarray(served >= demand * (1.0 - tol))


@dataclass
class FeasibilityReport:
    """Violated finite-load constraints; empty lists mean feasible."""

    airtime_violations: list[int] = field(default_factory=list)
    load_violations: list[int] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not self.airtime_violations and not self.load_violations


def check_finite_load_feasibility(
    x: Association,
    t: AirtimeAllocation,
    rates: RateMatrix,
    frames: Frames,
    demand: FloatArray,
    tol: float = TOL,
) -> FeasibilityReport:
    """Flag APs over their airtime budget and clients served above demand."""
    column = np.sum(x * t, axis=0)
    served = throughput(x, t, rates, frames)
    return FeasibilityReport(
        airtime_violations=np.flatnonzero(column > 1.0 + tol).tolist(),
        load_violations=np.flatnonzero(served > demand * (1.0 + tol)).tolist(),
    )
