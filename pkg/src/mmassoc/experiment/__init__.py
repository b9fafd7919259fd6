"""Experiment configs, the grid runner and result comparison."""

from mmassoc.experiment.compare import Comparison, bootstrap_ci, compare
from mmassoc.experiment.config import (
    PRESETS,
    DemandConfig,
    ExperimentConfig,
    PartitionConfig,
    ScenarioConfig,
    SeedRange,
    apply_overrides,
    load_config,
    parse_assignments,
    preset,
)
from mmassoc.experiment.instances import Instance, build_instances, cell_rng, make_context
from mmassoc.experiment.runner import ExperimentResult, ExperimentRunner, run_experiment

__all__ = [
    "PRESETS",
    "Comparison",
    "DemandConfig",
    "ExperimentConfig",
    "ExperimentResult",
    "ExperimentRunner",
    "Instance",
    "PartitionConfig",
    "ScenarioConfig",
    "SeedRange",
    "apply_overrides",
    "bootstrap_ci",
    "build_instances",
    "cell_rng",
    "compare",
    "load_config",
    "make_context",
    "parse_assignments",
    "preset",
    "run_experiment",
]
