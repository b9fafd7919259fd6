"""From an experiment config and a seed to concrete problem instances."""

import zlib
from dataclasses import dataclass

import numpy as np

from mmassoc.core.errors import InfeasibleInstanceError
from mmassoc.core.types import FloatArray, RateMatrix
from mmassoc.experiment.config import ExperimentConfig
from mmassoc.loadsolve.annealing import AnnealingTrace
from mmassoc.phy.propagation import rate_matrix
from mmassoc.phy.radio import Wall
from mmassoc.policies.base import PolicyContext
from mmassoc.scenario.mobility import random_waypoint
from mmassoc.scenario.topology import (
    Topology,
    demands_uniform,
    grid_aps,
    office_partitions,
    sample_clients_pmf,
    uniform_clients,
    uniform_in_box,
)
from mmassoc.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class Instance:
    """One (seed, snapshot) problem: positions, rates and offered load."""

    seed: int
    snapshot: int
    topology: Topology
    rates: RateMatrix
    demand: FloatArray | None


def _walls(config: ExperimentConfig) -> list[Wall]:
    scenario = config.scenario
    walls = list(scenario.walls)
    if scenario.partitions is not None:
        part = scenario.partitions
        walls += office_partitions(
            scenario.area,
            part.x_splits,
            part.y_splits,
            attenuation_db=part.attenuation_db,
            door_width=part.door_width,
        )
    return walls


def build_instances(config: ExperimentConfig, seed: int) -> list[Instance]:
    """All snapshots for ``seed``; a static scenario yields a single snapshot 0.

    Placement, demands and mobility are drawn in that order from
    ``default_rng(seed)``. Mobile clients start uniformly inside the
    movement box.
    """
    scenario = config.scenario
    rng = np.random.default_rng(seed)
    aps = grid_aps(scenario.area, *scenario.ap_grid)

    if scenario.mobility is not None:
        clients = uniform_in_box(scenario.mobility.box, scenario.clients, rng)
    elif scenario.placement == "pmf":
        clients = sample_clients_pmf(scenario.density, scenario.area, scenario.clients, rng)
    else:
        clients = uniform_clients(scenario.area, scenario.clients, rng)

    demand = None
    if config.demand is not None:
        demand = demands_uniform(scenario.clients, config.demand.low_bps, config.demand.high_bps, rng)

    base = Topology(
        area=scenario.area,
        ap_positions=aps,
        client_positions=clients,
        walls=tuple(_walls(config)),
    )
    if scenario.mobility is None:
        snapshots = [base]
    else:
        snapshots = [base.with_clients(p) for p in random_waypoint(clients, scenario.mobility, rng)]

    instances = []
    for k, topology in enumerate(snapshots):
        try:
            rates = rate_matrix(topology, config.radio)
        except InfeasibleInstanceError:
            logger.error("infeasible_instance", seed=seed, snapshot=k)
            raise
        instances.append(Instance(seed=seed, snapshot=k, topology=topology, rates=rates, demand=demand))
    return instances


def cell_rng(seed: int, snapshot: int, policy: str) -> np.random.Generator:
    """Solver stream for one cell, independent of which other cells run."""
    return np.random.default_rng([seed, snapshot, zlib.crc32(policy.encode("utf-8"))])


def make_context(
    config: ExperimentConfig,
    instance: Instance,
    policy: str,
    max_candidates: int | None = None,
    trace: AnnealingTrace | None = None,
) -> PolicyContext:
    return PolicyContext(
        rates=instance.rates,
        frames=config.frames,
        demand=instance.demand,
        topology=instance.topology,
        relaxed=config.relaxed,
        annealing=config.annealing,
        rng=cell_rng(instance.seed, instance.snapshot, policy),
        deterministic=config.deterministic,
        seed=instance.seed,
        max_candidates=max_candidates,
        trace=trace,
    )
