"""Rounding a fractional association to one AP per client."""

import numpy as np

from mmassoc.core.types import Association, FractionalAssociation, RateMatrix, one_hot
from mmassoc.utils.logging import get_logger

logger = get_logger(__name__)


def round_ml(xf: FractionalAssociation, rates: RateMatrix | None = None) -> Association:
    """Each client goes to the AP holding its largest fraction (ties: lowest index).

    With ``rates`` given, infeasible links are never chosen even if they carry mass.
    """
    scores = np.asarray(xf, dtype=np.float64)
    if rates is not None:
        scores = np.where(rates > 0, scores, -np.inf)
    return one_hot(np.argmax(scores, axis=1), scores.shape[1])


def iterative_rounding(
    xf: FractionalAssociation,
    rates: RateMatrix,
    rng: np.random.Generator | None = None,
    deterministic: bool = False,
) -> tuple[Association, int]:
    """Round the largest remaining fraction first and hand the freed mass on.

    Every step fixes the unrounded client with the largest x'_ij to that AP.
    The mass the client held on its other APs is split equally among the
    unrounded clients able to reach each of those APs; a share with no
    recipient is dropped. Exact ties are broken by ``rng`` unless
    ``deterministic`` (or no generator) is requested, in which case the lowest
    (client, AP) pair wins.

    Returns the association and the number of selection steps (always N).
    """
    feasible = rates > 0
    work = np.where(feasible, np.asarray(xf, dtype=np.float64), 0.0)
    n_clients, n_aps = work.shape
    unrounded = np.ones(n_clients, dtype=bool)
    choice = np.full(n_clients, -1, dtype=np.int64)
    steps = 0

    for _ in range(n_clients):
        candidates = np.where(unrounded[:, np.newaxis] & feasible, work, -np.inf)
        ties = np.argwhere(candidates == candidates.max())
        if deterministic or rng is None or len(ties) == 1:
            i, j = ties[0]
        else:
            i, j = ties[rng.integers(len(ties))]

        choice[i] = j
        unrounded[i] = False
        steps += 1

        freed = work[i].copy()
        freed[j] = 0.0
        work[i] = 0.0
        work[i, j] = 1.0
        for k in np.flatnonzero(freed > 0):
            recipients = unrounded & feasible[:, k]
            count = int(recipients.sum())
            if count:
                work[recipients, k] += freed[k] / count

    logger.debug("iterative_rounding_done", steps=steps)
    return one_hot(choice, n_aps), steps


def round_iterative(
    xf: FractionalAssociation,
    rates: RateMatrix,
    rng: np.random.Generator | None = None,
    deterministic: bool = False,
) -> Association:
    return iterative_rounding(xf, rates, rng=rng, deterministic=deterministic)[0]
