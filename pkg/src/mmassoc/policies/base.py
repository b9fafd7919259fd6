"""Policy interface: association rule plus airtime rule, under a traffic mode."""

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel

from mmassoc.core.errors import PolicyError
from mmassoc.core.metrics import cap_to_demand, equal_airtime, throughput, utility
from mmassoc.core.types import (
    AirtimeAllocation,
    Association,
    DemandVector,
    FrameConfig,
    Frames,
    RateMatrix,
    SolveReport,
)
from mmassoc.loadsolve.annealing import AnnealingTrace, SAParams
from mmassoc.loadsolve.waterfill import water_filling
from mmassoc.satsolve.relaxed import RelaxedSolverParams
from mmassoc.scenario.topology import Topology


class TrafficMode(str, Enum):
    """Backlogged clients or clients with a finite offered load."""

    SATURATION = "saturation"
    FINITE = "finite"


class AirtimeRule(str, Enum):
    EQUAL = "equal-airtime"
    WATER_FILLING = "water-filling"


class PolicyDefinition(BaseModel):
    """What a policy is called, when it applies and how it shares airtime."""

    name: str
    description: str
    modes: list[TrafficMode]
    airtime: AirtimeRule
    # set when finite load switches to another rule
    finite_airtime: AirtimeRule | None = None
    stand_in: bool = False

    def airtime_in(self, mode: TrafficMode) -> AirtimeRule:
        if mode is TrafficMode.FINITE and self.finite_airtime is not None:
            return self.finite_airtime
        return self.airtime

    @property
    def airtime_label(self) -> str:
        if self.finite_airtime is None or self.finite_airtime is self.airtime:
            return self.airtime.value
        return f"{self.airtime.value} (finite: {self.finite_airtime.value})"


@dataclass
class PolicyContext:
    """Everything a policy may look at for one (seed, snapshot) instance."""

    rates: RateMatrix
    frames: Frames = field(default_factory=FrameConfig)
    demand: DemandVector = None
    topology: Topology | None = None
    relaxed: RelaxedSolverParams = field(default_factory=RelaxedSolverParams)
    annealing: SAParams = field(default_factory=SAParams)
    rng: np.random.Generator = field(default_factory=lambda: np.random.default_rng(0))
    deterministic: bool = False
    seed: int = 0
    max_candidates: int | None = None
    trace: AnnealingTrace | None = None

    @property
    def mode(self) -> TrafficMode:
        return TrafficMode.SATURATION if self.demand is None else TrafficMode.FINITE


@dataclass
class PolicyOutcome:
    """Association, airtime and the report built from them."""

    association: Association
    airtime: AirtimeAllocation
    report: SolveReport


class BasePolicy(ABC):
    """Abstract base class for all policies."""

    @property
    @abstractmethod
    def definition(self) -> PolicyDefinition:
        ...

    @abstractmethod
    def solve(self, context: PolicyContext) -> PolicyOutcome:
        ...

    def supports(self, mode: TrafficMode) -> bool:
        return mode in self.definition.modes

    def run(self, context: PolicyContext) -> PolicyOutcome:
        """Check the mode, solve, and stamp the report with name, seed and timing."""
        if not self.supports(context.mode):
            raise PolicyError(
                f"policy '{self.definition.name}' does not support {context.mode.value} traffic"
            )
        started = time.perf_counter()
        outcome = self.solve(context)
        outcome.report.policy_name = self.definition.name
        outcome.report.seed = context.seed
        outcome.report.wall_time = time.perf_counter() - started
        return outcome


def evaluate(
    x: Association,
    context: PolicyContext,
    rule: AirtimeRule,
    **report_fields: Any,
) -> PolicyOutcome:
    """Allocate airtime for ``x`` under ``rule`` and score it.

    Equal airtime under finite load is trimmed to each client's demand; the
    trimmed airtime stays idle.
    """
    if rule is AirtimeRule.WATER_FILLING:
        if context.demand is None:
            raise PolicyError("water filling needs a demand vector")
        t = water_filling(x, context.rates, context.frames, context.demand)
    else:
        t = equal_airtime(x)
        if context.demand is not None:
            t = cap_to_demand(x, t, context.rates, context.frames, context.demand)
    served = throughput(x, t, context.rates, context.frames)
    report = SolveReport.from_throughput(served, utility(served), **report_fields)
    return PolicyOutcome(association=x, airtime=t, report=report)
