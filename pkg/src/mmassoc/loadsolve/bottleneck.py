"""Which APs are short of airtime and which have some to spare."""

from dataclasses import dataclass

import numpy as np

from mmassoc.core.metrics import throughput
from mmassoc.core.types import (
    TOL,
    AirtimeAllocation,
    Association,
    FloatArray,
    Frames,
    IntArray,
    RateMatrix,
    efficiencies,
)


@dataclass
class BottleneckReport:
    """Per-AP unmet load and spare airtime, both in bits/s.

    ``load[j]`` is demand the AP leaves unserved; ``time[j]`` is its unused
    airtime valued at the mean rate of its clients. APs with a negative
    score have room; the rest are bottlenecks.
    """

    load: FloatArray
    time: FloatArray

    @property
    def score(self) -> FloatArray:
        return self.load - self.time

    @property
    def minus(self) -> IntArray:
        return np.flatnonzero(self.score < 0)

    @property
    def plus(self) -> IntArray:
        return np.flatnonzero(self.score >= 0)


def _mean_rates(x: Association, rates: RateMatrix) -> FloatArray:
    """Mean rate of each AP's clients; an empty AP uses every client able to reach it."""
    members = x.sum(axis=0)
    reachable = rates > 0
    own = np.divide((x * rates).sum(axis=0), members, out=np.zeros(rates.shape[1]), where=members > 0)
    count = reachable.sum(axis=0)
    fallback = np.divide(
        np.where(reachable, rates, 0.0).sum(axis=0),
        count,
        out=np.zeros(rates.shape[1]),
        where=count > 0,
    )
    return np.where(members > 0, own, fallback)


def bottlenecks(
    x: Association,
    t: AirtimeAllocation,
    rates: RateMatrix,
    frames: Frames,
    demand: FloatArray,
) -> BottleneckReport:
    """Score every AP for the perturbation step; ``t`` must come from water filling."""
    h = efficiencies(frames, rates.shape[1])
    served = throughput(x, t, rates, frames)
    offered = x.T @ demand
    unmet = offered - x.T @ served
    unmet = np.where(unmet > TOL * np.maximum(offered, 1.0), unmet, 0.0)

    slack = 1.0 - np.sum(x * t, axis=0)
    slack = np.where(slack > TOL, slack, 0.0)
    return BottleneckReport(load=unmet, time=slack * h * _mean_rates(x, rates))
