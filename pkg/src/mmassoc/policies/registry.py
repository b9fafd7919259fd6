"""Policy registry for lookup by name."""

from mmassoc.core.errors import PolicyError
from mmassoc.policies.base import BasePolicy, PolicyDefinition


class PolicyRegistry:
    """Registry for managing available policies."""

    def __init__(self) -> None:
        self._policies: dict[str, BasePolicy] = {}

    def register(self, policy: BasePolicy) -> None:
        self._policies[policy.definition.name] = policy

    def get(self, name: str) -> BasePolicy:
        """Look up a policy; unknown names raise PolicyError listing the known ones."""
        try:
            return self._policies[name]
        except KeyError:
            raise PolicyError(
                f"unknown policy '{name}' (available: {', '.join(self.names())})"
            ) from None

    def names(self) -> list[str]:
        return sorted(self._policies)

    def list_all(self) -> list[PolicyDefinition]:
        return [self._policies[name].definition for name in self.names()]

    def register_builtin(self) -> None:
        """Register all built-in policies."""
        from mmassoc.policies.base import AirtimeRule, TrafficMode
        from mmassoc.policies.builtin import (
            AnnealingPolicy,
            GreedyPolicy,
            MinMaxLoadPolicy,
            OraclePolicy,
            SaturationPolicy,
            SnrPolicy,
        )

        # Baselines
        self.register(SnrPolicy(AirtimeRule.EQUAL))
        self.register(SnrPolicy(AirtimeRule.WATER_FILLING))
        self.register(GreedyPolicy())
        self.register(MinMaxLoadPolicy())

        # Proposed solvers
        self.register(SaturationPolicy())
        self.register(AnnealingPolicy())

        # Ground truth
        self.register(OraclePolicy("oracle", [TrafficMode.SATURATION, TrafficMode.FINITE]))
        self.register(OraclePolicy("oracle-sat", [TrafficMode.SATURATION]))
        self.register(OraclePolicy("oracle-finite", [TrafficMode.FINITE]))


def default_registry() -> PolicyRegistry:
    registry = PolicyRegistry()
    registry.register_builtin()
    return registry
