"""Finite-difference check of the relaxed objective's analytic gradient."""

import numpy as np

from mmassoc.core.types import FractionalAssociation, Frames, RateMatrix
from mmassoc.satsolve.relaxed import relaxed_gradient, relaxed_utility


def gradient_check(
    xf: FractionalAssociation,
    rates: RateMatrix,
    frames: Frames,
    step: float = 1e-6,
) -> float:
    """Largest relative error between analytic and central-difference partials.

    Only feasible coordinates are compared; the relative error of a pair
    (a, n) is |a - n| / max(|a|, |n|, 1).
    """
    x = np.asarray(xf, dtype=np.float64)
    analytic = relaxed_gradient(x, rates, frames)
    worst = 0.0
    for i, j in np.argwhere(rates > 0):
        up = x.copy()
        down = x.copy()
        up[i, j] += step
        down[i, j] -= step
        numeric = (relaxed_utility(up, rates, frames) - relaxed_utility(down, rates, frames)) / (2 * step)
        scale = max(abs(analytic[i, j]), abs(numeric), 1.0)
        worst = max(worst, abs(analytic[i, j] - numeric) / scale)
    return worst
