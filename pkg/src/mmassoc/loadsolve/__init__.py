"""Finite-load association: water filling, bottleneck scores, simulated annealing."""

from mmassoc.loadsolve.annealing import (
    AnnealingTrace,
    Move,
    SAParams,
    anneal_restarts,
    perturbate,
    propose_move,
    simulated_annealing,
)
from mmassoc.loadsolve.bottleneck import BottleneckReport, bottlenecks
from mmassoc.loadsolve.repair import airtime_excess, pack_demands
from mmassoc.loadsolve.waterfill import finite_utility, max_min_share, required_airtime, water_filling

__all__ = [
    "AnnealingTrace",
    "BottleneckReport",
    "Move",
    "SAParams",
    "airtime_excess",
    "anneal_restarts",
    "bottlenecks",
    "finite_utility",
    "max_min_share",
    "pack_demands",
    "perturbate",
    "propose_move",
    "required_airtime",
    "simulated_annealing",
    "water_filling",
]
