"""Brute-force optima over every feasible association.

Candidates are enumerated as a mixed-radix counter over each client's
feasible APs, client 0 most significant, in blocks of
``settings.oracle.chunk_size``. Scoring is vectorised per block and the first
maximum wins, so ties resolve to the lexicographically smallest AP vector.
"""

import math
from collections.abc import Iterator

import numpy as np

from mmassoc.config.settings import settings
from mmassoc.core.errors import SearchSpaceTooLargeError
from mmassoc.core.types import (
    AirtimeAllocation,
    Association,
    FloatArray,
    Frames,
    IntArray,
    RateMatrix,
    efficiencies,
    one_hot,
    validate_rates,
)
from mmassoc.utils.logging import get_logger

logger = get_logger(__name__)


def candidate_count(rates: RateMatrix) -> int:
    """Number of feasible associations, prod_i |{j : r_ij > 0}|."""
    return math.prod(int(c) for c in np.count_nonzero(rates > 0, axis=1))


def _guard(rates: RateMatrix, max_candidates: int | None) -> int:
    limit = settings.oracle.max_candidates if max_candidates is None else max_candidates
    count = candidate_count(rates)
    if count > limit:
        raise SearchSpaceTooLargeError(count, limit)
    return count


def _candidates(rates: RateMatrix, chunk_size: int) -> Iterator[IntArray]:
    """Blocks of AP-index vectors (C x N) in lexicographic order."""
    feasible = rates > 0
    radices = tuple(int(c) for c in feasible.sum(axis=1))
    options = np.zeros((rates.shape[0], max(radices)), dtype=np.int64)
    for i, row in enumerate(feasible):
        aps = np.flatnonzero(row)
        options[i, : aps.size] = aps
    total = math.prod(radices)
    clients = np.arange(rates.shape[0])
    for start in range(0, total, chunk_size):
        digits = np.unravel_index(np.arange(start, min(start + chunk_size, total)), radices)
        yield options[clients, np.column_stack(digits)]


def _log_capacity(rates: RateMatrix, frames: Frames) -> FloatArray:
    capacity = rates * efficiencies(frames, rates.shape[1])[np.newaxis, :]
    return np.where(capacity > 0, np.log(np.where(capacity > 0, capacity, 1.0)), -np.inf)


def exhaustive_saturation(
    rates: RateMatrix,
    frames: Frames,
    max_candidates: int | None = None,
) -> tuple[Association, float]:
    """Equal-airtime utility maximiser by full enumeration."""
    rates = validate_rates(rates)
    count = _guard(rates, max_candidates)
    n_clients, n_aps = rates.shape
    log_cap = _log_capacity(rates, frames)
    clients = np.arange(n_clients)

    best_choice: IntArray | None = None
    best_value = -np.inf
    for block in _candidates(rates, settings.oracle.chunk_size):
        loads = (block[:, :, np.newaxis] == np.arange(n_aps)).sum(axis=1)
        spread = np.where(loads > 0, loads * np.log(np.maximum(loads, 1)), 0.0).sum(axis=1)
        values = log_cap[clients, block].sum(axis=1) - spread
        k = int(np.argmax(values))
        if values[k] > best_value:
            best_value = float(values[k])
            best_choice = block[k].copy()

    assert best_choice is not None
    logger.debug("oracle_saturation_done", candidates=count, utility=best_value)
    return one_hot(best_choice, n_aps), best_value


def _water_levels(need: FloatArray, members: np.ndarray) -> FloatArray:
    """Max-min airtime per candidate row for one AP with a unit budget."""
    ordered = np.sort(np.where(members, need, np.inf), axis=1)
    present = np.isfinite(ordered)
    ordered = np.where(present, ordered, 0.0)
    before = np.cumsum(ordered, axis=1) - ordered
    left = members.sum(axis=1, keepdims=True) - np.arange(need.shape[1])[np.newaxis, :]
    over = present & (ordered * left > 1.0 - before)
    first = np.argmax(over, axis=1)
    rows = np.arange(need.shape[0])
    level = np.where(
        over.any(axis=1),
        (1.0 - before[rows, first]) / np.maximum(left[rows, first], 1),
        np.inf,
    )
    return np.where(members, np.minimum(need, level[:, np.newaxis]), 0.0)


def exhaustive_finite(
    rates: RateMatrix,
    frames: Frames,
    demand: FloatArray,
    max_candidates: int | None = None,
) -> tuple[Association, AirtimeAllocation, float]:
    """Water-filled utility maximiser by full enumeration."""
    rates = validate_rates(rates)
    demand = np.asarray(demand, dtype=np.float64)
    if demand.shape != (rates.shape[0],) or np.any(demand <= 0):
        raise ValueError("demand must hold one positive value per client")
    count = _guard(rates, max_candidates)
    n_clients, n_aps = rates.shape
    capacity = rates * efficiencies(frames, n_aps)[np.newaxis, :]
    clients = np.arange(n_clients)

    best_choice: IntArray | None = None
    best_airtime: FloatArray | None = None
    best_value = -np.inf
    for block in _candidates(rates, settings.oracle.chunk_size):
        cap = capacity[clients, block]
        need = demand[np.newaxis, :] / cap
        airtime = np.zeros_like(need)
        for j in range(n_aps):
            airtime += _water_levels(need, block == j)
        values = np.log(airtime * cap).sum(axis=1)
        k = int(np.argmax(values))
        if values[k] > best_value:
            best_value = float(values[k])
            best_choice = block[k].copy()
            best_airtime = airtime[k].copy()

    assert best_choice is not None and best_airtime is not None
    x = one_hot(best_choice, n_aps)
    logger.debug("oracle_finite_done", candidates=count, utility=best_value)
    return x, x * best_airtime[:, np.newaxis], best_value
