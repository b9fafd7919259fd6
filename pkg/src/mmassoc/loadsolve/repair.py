"""Local search that packs demands under each AP's airtime budget.

An association serves every demand exactly when, at every AP, the airtime its
clients need adds up to at most the whole data interval. The search minimises
the total excess ``sum_j max(0, L_j - 1)`` over relocations of one client and
swaps of two clients on different APs, breaking plateaus with the sum of
squared loads. Random kicks restart the descent when it stalls.
"""

from typing import Literal

import numpy as np

from mmassoc.core.metrics import required_airtime_matrix
from mmassoc.core.types import Association, FloatArray, Frames, IntArray, RateMatrix, ap_of, one_hot
from mmassoc.utils.logging import get_logger

logger = get_logger(__name__)

_EPS = 1e-12

Step = tuple[Literal["move", "swap"], int, int]


def _over(load: FloatArray) -> FloatArray:
    return np.maximum(load - 1.0, 0.0)


def _cost(choice: IntArray, need: FloatArray) -> tuple[float, float, FloatArray]:
    load = np.bincount(
        choice, weights=need[np.arange(choice.size), choice], minlength=need.shape[1]
    )
    return float(_over(load).sum()), float(np.square(load).sum()), load


def _pick(move_key: FloatArray, swap_key: FloatArray, n_aps: int, n_clients: int) -> Step | None:
    best_move = int(np.argmin(move_key))
    best_swap = int(np.argmin(swap_key))
    gain_move = float(move_key.flat[best_move])
    gain_swap = float(swap_key.flat[best_swap])
    if min(gain_move, gain_swap) >= -_EPS:
        return None
    if gain_move <= gain_swap:
        client, ap = divmod(best_move, n_aps)
        return "move", client, ap
    first, second = divmod(best_swap, n_clients)
    return "swap", first, second


def _best_step(choice: IntArray, need: FloatArray, load: FloatArray) -> Step | None:
    """The relocation or swap that lowers (excess, squared load) the most."""
    n_clients, n_aps = need.shape
    rows = np.arange(n_clients)
    home = load[choice]
    left = home - need[rows, choice]

    # client i relocated to AP k; infeasible links come out as +inf
    arrive = load[np.newaxis, :] + need
    move_excess = (_over(left) - _over(home))[:, np.newaxis] + _over(arrive) - _over(load)
    move_square = (
        (np.square(left) - np.square(home))[:, np.newaxis] + np.square(arrive) - np.square(load)
    )
    move_excess[rows, choice] = np.inf
    move_square[rows, choice] = np.inf

    # client i swapped with client l: into_home[i, l] is l's need at i's AP
    into_home = need[:, choice].T
    new_i = left[:, np.newaxis] + into_home
    new_l = left[np.newaxis, :] + into_home.T
    old = _over(home)[:, np.newaxis] + _over(home)[np.newaxis, :]
    swap_excess = _over(new_i) + _over(new_l) - old
    old_square = np.square(home)[:, np.newaxis] + np.square(home)[np.newaxis, :]
    swap_square = np.square(new_i) + np.square(new_l) - old_square
    same = choice[:, np.newaxis] == choice[np.newaxis, :]
    swap_excess[same] = np.inf
    swap_square[same] = np.inf

    step = _pick(move_excess, swap_excess, n_aps, n_clients)
    if step is not None:
        return step
    flat_move = np.where(np.abs(move_excess) <= _EPS, move_square, np.inf)
    flat_swap = np.where(np.abs(swap_excess) <= _EPS, swap_square, np.inf)
    return _pick(flat_move, flat_swap, n_aps, n_clients)


def _descend(choice: IntArray, need: FloatArray, max_steps: int) -> IntArray:
    choice = choice.copy()
    for _ in range(max_steps):
        excess, _, load = _cost(choice, need)
        if excess <= _EPS:
            break
        step = _best_step(choice, need, load)
        if step is None:
            break
        kind, a, b = step
        if kind == "move":
            choice[a] = b
        else:
            choice[a], choice[b] = choice[b], choice[a]
    return choice


def _kick(
    choice: IntArray, need: FloatArray, load: FloatArray, rng: np.random.Generator
) -> IntArray:
    """Relocate one client off an overloaded AP, then one more client anywhere."""
    kicked = choice.copy()
    feasible = np.isfinite(need)
    crowded = np.flatnonzero(load[kicked] > 1.0 + _EPS)
    for pool in (crowded, np.arange(kicked.size)):
        movable = pool[feasible[pool].sum(axis=1) > 1]
        if movable.size == 0:
            continue
        client = int(rng.choice(movable))
        options = np.flatnonzero(feasible[client])
        kicked[client] = int(rng.choice(options[options != kicked[client]]))
    return kicked


def _can_fit(need: FloatArray) -> bool:
    """False when per-client or total airtime already rules out zero excess."""
    cheapest = need.min(axis=1)
    return bool(np.all(cheapest <= 1.0 + _EPS) and cheapest.sum() <= need.shape[1] + _EPS)


def airtime_excess(x: Association, rates: RateMatrix, frames: Frames, demand: FloatArray) -> float:
    """Total airtime by which the APs of ``x`` are oversubscribed (0 when all fit)."""
    need = required_airtime_matrix(rates, frames, np.asarray(demand, dtype=np.float64))
    excess, _, _ = _cost(ap_of(x), need)
    return excess


def pack_demands(
    x: Association,
    rates: RateMatrix,
    frames: Frames,
    demand: FloatArray,
    rng: np.random.Generator,
    kicks: int = 50,
) -> Association:
    """Search from ``x`` for an association whose per-AP airtime needs fit in budget.

    Returns the association with the smallest (excess, squared load) found.
    It serves every demand exactly when its excess is zero. When no association
    can fit (some client needs more than a whole interval, or the cheapest
    needs add up to more than one interval per AP) ``x`` is returned as is.
    """
    need = required_airtime_matrix(rates, frames, np.asarray(demand, dtype=np.float64))
    if not _can_fit(need):
        logger.debug("pack_demands_skipped", total_airtime=float(need.min(axis=1).sum()))
        return np.asarray(x, dtype=np.float64).copy()
    max_steps = 10 * need.size
    best = _descend(ap_of(x), need, max_steps)
    best_excess, best_square, best_load = _cost(best, need)
    used = 0
    while best_excess > _EPS and used < kicks:
        used += 1
        candidate = _descend(_kick(best, need, best_load, rng), need, max_steps)
        excess, square, load = _cost(candidate, need)
        if (excess, square) < (best_excess, best_square):
            best, best_excess, best_square, best_load = candidate, excess, square, load
    logger.debug("pack_demands", excess=best_excess, kicks=used)
    return one_hot(best, need.shape[1])
