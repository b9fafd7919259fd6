"""Max-min fair airtime under per-client demand caps."""

import numpy as np
import numpy.typing as npt

from mmassoc.core.errors import InfeasibleLinkError
from mmassoc.core.metrics import required_airtime_matrix, throughput, utility
from mmassoc.core.types import AirtimeAllocation, Association, FloatArray, Frames, RateMatrix


def required_airtime(
    demand_bps: float,
    rate_bps: float,
    efficiency: float,
    *,
    client: int = -1,
    ap: int = -1,
) -> float:
    """Data-interval fraction whose throughput t * h * r equals the demand.

    Values above 1 are legal: the demand exceeds what the AP can carry.
    """
    if rate_bps <= 0:
        raise InfeasibleLinkError(client, ap)
    return demand_bps / (efficiency * rate_bps)


def max_min_share(demands: npt.ArrayLike, budget: float = 1.0) -> FloatArray:
    """Single-resource water filling.

    Demands are visited in increasing order; each is granted in full while it
    fits under the current fair share, after which every remaining client gets
    the same share of what is left.
    """
    d = np.asarray(demands, dtype=np.float64)
    alloc = np.zeros_like(d)
    if d.size == 0:
        return alloc
    if d.sum() <= budget:
        return d.copy()

    order = np.argsort(d, kind="stable")
    remaining = budget
    for pos, idx in enumerate(order):
        fair = remaining / (d.size - pos)
        if d[idx] > fair:
            alloc[order[pos:]] = fair
            break
        alloc[idx] = d[idx]
        remaining -= d[idx]
    return alloc


def water_filling(
    x: Association,
    rates: RateMatrix,
    frames: Frames,
    demand: FloatArray,
) -> AirtimeAllocation:
    """Apply :func:`max_min_share` at every AP with a unit budget."""
    bad = np.argwhere((x > 0) & (rates <= 0))
    if bad.size:
        raise InfeasibleLinkError(int(bad[0][0]), int(bad[0][1]))
    need = required_airtime_matrix(rates, frames, np.asarray(demand, dtype=np.float64))
    t = np.zeros_like(rates, dtype=np.float64)
    for j in range(rates.shape[1]):
        members = np.flatnonzero(x[:, j] > 0)
        if members.size:
            t[members, j] = max_min_share(need[members, j])
    return t


def finite_utility(
    x: Association,
    t: AirtimeAllocation,
    rates: RateMatrix,
    frames: Frames,
) -> float:
    """Sum of ln(t_ij h_j r_ij) over associated pairs."""
    return utility(throughput(x, t, rates, frames))
