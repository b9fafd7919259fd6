"""Deployment generators: AP grids, client placement, mobility, walls."""

from mmassoc.scenario.mobility import MobilityParams, random_waypoint
from mmassoc.scenario.topology import (
    ClientDensity,
    GaussianComponent,
    Topology,
    demands_uniform,
    grid_aps,
    load_topology,
    office_partitions,
    sample_clients_pmf,
    save_topology,
    uniform_clients,
    uniform_in_box,
)

__all__ = [
    "ClientDensity",
    "GaussianComponent",
    "MobilityParams",
    "Topology",
    "demands_uniform",
    "grid_aps",
    "load_topology",
    "office_partitions",
    "random_waypoint",
    "sample_clients_pmf",
    "save_topology",
    "uniform_clients",
    "uniform_in_box",
]
