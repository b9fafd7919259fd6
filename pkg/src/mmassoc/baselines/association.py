"""Reference association rules; none of them use randomness."""

import numpy as np

from mmassoc.core.types import Association, FloatArray, RateMatrix, one_hot
from mmassoc.scenario.topology import Topology


def associate_snr(rates: RateMatrix) -> Association:
    """Strongest link wins (highest MCS rate, ties to the lowest AP index)."""
    return one_hot(np.argmax(rates, axis=1), rates.shape[1])


def associate_greedy(topology: Topology, rates: RateMatrix) -> Association:
    """APs take turns, in index order, claiming their nearest free client.

    Only clients with a positive rate to the AP can be claimed. Anyone left
    over (no AP can take a turn for them) falls back to the strongest link.
    """
    distance = topology.distances()
    reachable = rates > 0
    n_clients, n_aps = rates.shape
    choice = np.full(n_clients, -1, dtype=np.int64)
    free = np.ones(n_clients, dtype=bool)

    progressed = True
    while free.any() and progressed:
        progressed = False
        for j in range(n_aps):
            candidates = np.flatnonzero(free & reachable[:, j])
            if candidates.size == 0:
                continue
            nearest = candidates[np.argmin(distance[candidates, j])]
            choice[nearest] = j
            free[nearest] = False
            progressed = True
            if not free.any():
                break

    leftover = np.flatnonzero(free)
    choice[leftover] = np.argmax(rates[leftover], axis=1)
    return one_hot(choice, n_aps)


def associate_minmax_load(rates: RateMatrix, demand: FloatArray | None = None) -> Association:
    """Centralised min-max utilisation greedy, used in place of DAA.

    Clients are placed heaviest first (by lambda_i / max_j r_ij), each on the
    reachable AP whose utilisation sum(lambda / r) would be lowest afterwards.
    Saturated traffic counts as lambda = 1 for every client.
    """
    n_clients, n_aps = rates.shape
    lam = np.ones(n_clients) if demand is None else np.asarray(demand, dtype=np.float64)
    weight = lam / rates.max(axis=1)
    order = np.argsort(-weight, kind="stable")

    cost = np.where(rates > 0, lam[:, np.newaxis] / np.where(rates > 0, rates, 1.0), np.inf)
    utilisation = np.zeros(n_aps)
    choice = np.empty(n_clients, dtype=np.int64)
    for i in order:
        j = int(np.argmin(utilisation + cost[i]))
        choice[i] = j
        utilisation[j] += cost[i, j]
    return one_hot(choice, n_aps)
