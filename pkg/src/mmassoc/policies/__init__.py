"""Named association policies, looked up through a registry."""

from mmassoc.policies.base import (
    AirtimeRule,
    BasePolicy,
    PolicyContext,
    PolicyDefinition,
    PolicyOutcome,
    TrafficMode,
    evaluate,
)
from mmassoc.policies.registry import PolicyRegistry, default_registry

__all__ = [
    "AirtimeRule",
    "BasePolicy",
    "PolicyContext",
    "PolicyDefinition",
    "PolicyOutcome",
    "PolicyRegistry",
    "TrafficMode",
    "default_registry",
    "evaluate",
]
