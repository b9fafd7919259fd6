"""Built-in policies: baselines, the proposed solvers and the exhaustive oracles."""

from collections.abc import Sequence

from mmassoc.baselines.association import associate_greedy, associate_minmax_load, associate_snr
from mmassoc.core.errors import PolicyError
from mmassoc.loadsolve.annealing import simulated_annealing
from mmassoc.oracle.exhaustive import exhaustive_finite, exhaustive_saturation
from mmassoc.policies.base import (
    AirtimeRule,
    BasePolicy,
    PolicyContext,
    PolicyDefinition,
    PolicyOutcome,
    TrafficMode,
    evaluate,
)
from mmassoc.satsolve.solver import solve_saturation

_BOTH = [TrafficMode.SATURATION, TrafficMode.FINITE]


class SnrPolicy(BasePolicy):
    """Strongest-link association with either airtime rule."""

    def __init__(self, airtime: AirtimeRule = AirtimeRule.EQUAL) -> None:
        self._airtime = airtime

    @property
    def definition(self) -> PolicyDefinition:
        if self._airtime is AirtimeRule.EQUAL:
            return PolicyDefinition(
                name="snr-ea",
                description="Highest-SNR association, equal airtime per AP",
                modes=_BOTH,
                airtime=AirtimeRule.EQUAL,
            )
        return PolicyDefinition(
            name="snr-wf",
            description="Highest-SNR association, max-min water-filled airtime",
            modes=[TrafficMode.FINITE],
            airtime=AirtimeRule.WATER_FILLING,
        )

    def solve(self, context: PolicyContext) -> PolicyOutcome:
        return evaluate(associate_snr(context.rates), context, self._airtime)


class GreedyPolicy(BasePolicy):
    @property
    def definition(self) -> PolicyDefinition:
        return PolicyDefinition(
            name="greedy-ea",
            description="APs take turns claiming their nearest client, equal airtime",
            modes=_BOTH,
            airtime=AirtimeRule.EQUAL,
        )

    def solve(self, context: PolicyContext) -> PolicyOutcome:
        if context.topology is None:
            raise PolicyError("greedy-ea needs client and AP positions")
        return evaluate(associate_greedy(context.topology, context.rates), context, AirtimeRule.EQUAL)


class MinMaxLoadPolicy(BasePolicy):
    @property
    def definition(self) -> PolicyDefinition:
        return PolicyDefinition(
            name="minmax-ea",
            description="Min-max AP utilisation greedy (DAA stand-in), equal airtime",
            modes=_BOTH,
            airtime=AirtimeRule.EQUAL,
            stand_in=True,
        )

    def solve(self, context: PolicyContext) -> PolicyOutcome:
        x = associate_minmax_load(context.rates, context.demand)
        return evaluate(x, context, AirtimeRule.EQUAL)


class SaturationPolicy(BasePolicy):
    """Relaxed solve plus iterative rounding, equal airtime."""

    @property
    def definition(self) -> PolicyDefinition:
        return PolicyDefinition(
            name="proposed-sat",
            description="Concave relaxation with iterative rounding, equal airtime",
            modes=_BOTH,
            airtime=AirtimeRule.EQUAL,
        )

    def solve(self, context: PolicyContext) -> PolicyOutcome:
        x, solved = solve_saturation(
            context.rates,
            context.frames,
            context.relaxed,
            rng=context.rng,
            deterministic=context.deterministic,
        )
        return evaluate(
            x,
            context,
            AirtimeRule.EQUAL,
            iterations=solved.iterations,
            converged=solved.converged,
            metadata=dict(solved.metadata),
        )


class AnnealingPolicy(BasePolicy):
    """Simulated annealing with water filling, started from the saturation solution."""

    @property
    def definition(self) -> PolicyDefinition:
        return PolicyDefinition(
            name="proposed-sawf",
            description="Simulated annealing over associations with water-filled airtime",
            modes=[TrafficMode.FINITE],
            airtime=AirtimeRule.WATER_FILLING,
        )

    def solve(self, context: PolicyContext) -> PolicyOutcome:
        assert context.demand is not None
        x0, start = solve_saturation(
            context.rates,
            context.frames,
            context.relaxed,
            rng=context.rng,
            deterministic=context.deterministic,
        )
        x, t, report = simulated_annealing(
            x0,
            context.rates,
            context.frames,
            context.demand,
            context.annealing,
            rng=context.rng,
            trace=context.trace,
        )
        report.metadata["relaxed_iterations"] = start.iterations
        return PolicyOutcome(association=x, airtime=t, report=report)


class OraclePolicy(BasePolicy):
    """Exhaustive optimum for whichever traffic modes it is registered for."""

    def __init__(self, name: str, modes: Sequence[TrafficMode]) -> None:
        self._name = name
        self._modes = list(modes)

    @property
    def definition(self) -> PolicyDefinition:
        saturation = TrafficMode.SATURATION in self._modes
        finite = TrafficMode.FINITE in self._modes
        return PolicyDefinition(
            name=self._name,
            description="Exhaustive search over every feasible association",
            modes=self._modes,
            airtime=AirtimeRule.EQUAL if saturation else AirtimeRule.WATER_FILLING,
            finite_airtime=AirtimeRule.WATER_FILLING if finite else None,
        )

    def solve(self, context: PolicyContext) -> PolicyOutcome:
        rule = self.definition.airtime_in(context.mode)
        if context.demand is None:
            x, _ = exhaustive_saturation(context.rates, context.frames, context.max_candidates)
        else:
            x, _, _ = exhaustive_finite(
                context.rates, context.frames, context.demand, context.max_candidates
            )
        return evaluate(x, context, rule)
