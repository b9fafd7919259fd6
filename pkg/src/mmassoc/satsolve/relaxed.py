"""Fractional association under saturation: a concave program over row simplices.

The relaxed objective is

    U(x) = sum_ij x_ij ln(h_j r_ij / L_j),   L_j = sum_k x_kj

which equals sum_ij x_ij ln(h_j r_ij) - sum_j L_j ln L_j and is concave. It is
maximised by projected gradient ascent with backtracking.
"""

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

from mmassoc.core.types import FloatArray, Frames, FractionalAssociation, RateMatrix, efficiencies
from mmassoc.utils.logging import get_logger

logger = get_logger(__name__)

_LOAD_FLOOR = 1e-12
_STEP_FLOOR = 1e-14
_STEP_GROWTH = 1.5
_STEP_CAP = 100.0


class RelaxedSolverParams(BaseModel):
    """Projected-gradient settings; ``step_size`` is the initial step."""

    model_config = ConfigDict(frozen=True)

    step_size: float = Field(default=0.05, gt=0)
    max_iters: int = Field(default=5000, gt=0)
    tol: float = Field(default=1e-8, gt=0)
    projection_tol: float = Field(default=1e-12, gt=0)
    jitter: float = Field(default=0.0, ge=0)


def _log_capacity(rates: RateMatrix, frames: Frames) -> FloatArray:
    """ln(h_j r_ij) on feasible links, 0 elsewhere."""
    h = efficiencies(frames, rates.shape[1])
    capacity = rates * h[np.newaxis, :]
    return np.where(rates > 0, np.log(np.where(rates > 0, capacity, 1.0)), 0.0)


def relaxed_utility(xf: FractionalAssociation, rates: RateMatrix, frames: Frames) -> float:
    """Relaxed objective with 0 ln(.) = 0 and empty APs contributing nothing."""
    x = np.where(rates > 0, xf, 0.0)
    load = x.sum(axis=0)
    spread = np.where(load > 0, load * np.log(np.where(load > 0, load, 1.0)), 0.0)
    return float(np.sum(x * _log_capacity(rates, frames)) - np.sum(spread))


def relaxed_gradient(xf: FractionalAssociation, rates: RateMatrix, frames: Frames) -> FloatArray:
    """dU/dx_ij = ln(h_j r_ij) - ln L_j - 1 on feasible links, 0 elsewhere."""
    x = np.where(rates > 0, xf, 0.0)
    load = np.maximum(x.sum(axis=0), _LOAD_FLOOR)
    grad = _log_capacity(rates, frames) - np.log(load)[np.newaxis, :] - 1.0
    return np.where(rates > 0, grad, 0.0)


def project_capped_simplex(v: FloatArray, mask: npt.NDArray[np.bool_]) -> FloatArray:
    """Row-wise Euclidean projection onto {x >= 0, sum x <= 1, x = 0 off ``mask``}.

    Rows whose positive part already sums to at most 1 are clipped; the others
    are projected onto the unit simplex by the sorting method.
    """
    n_cols = v.shape[1]
    clipped = np.where(mask, np.maximum(v, 0.0), 0.0)
    inside = clipped.sum(axis=1) <= 1.0

    ordered = -np.sort(-np.where(mask, v, -np.inf), axis=1)
    finite = np.isfinite(ordered)
    ordered = np.where(finite, ordered, 0.0)
    shifted = np.cumsum(ordered, axis=1) - 1.0
    support = finite & (ordered - shifted / np.arange(1, n_cols + 1) > 0)
    rho = n_cols - 1 - np.argmax(support[:, ::-1], axis=1)
    theta = shifted[np.arange(v.shape[0]), rho] / (rho + 1)
    projected = np.where(mask, np.maximum(v - theta[:, np.newaxis], 0.0), 0.0)

    return np.where(inside[:, np.newaxis], clipped, projected)


@dataclass
class RelaxedSolution:
    """Result of :func:`solve_relaxed`."""

    x: FractionalAssociation
    utility: float
    iterations: int
    converged: bool
    trace: list[float] = field(default_factory=list)


def _renormalise(x: FractionalAssociation, mask: npt.NDArray[np.bool_]) -> FractionalAssociation:
    rows = x.sum(axis=1, keepdims=True)
    uniform = mask / mask.sum(axis=1, keepdims=True)
    return np.where(rows > 0, x / np.where(rows > 0, rows, 1.0), uniform)


def solve_relaxed(
    rates: RateMatrix,
    frames: Frames,
    params: RelaxedSolverParams | None = None,
    rng: np.random.Generator | None = None,
) -> RelaxedSolution:
    """Maximise the relaxed utility by projected gradient ascent.

    Starts from the uniform split over each client's feasible APs (optionally
    jittered with ``rng``); only non-decreasing steps are accepted, halving the
    step on failure. The returned point has every row renormalised to sum 1.
    """
    params = params or RelaxedSolverParams()
    mask = rates > 0
    x = mask / mask.sum(axis=1, keepdims=True)
    if params.jitter > 0 and rng is not None:
        x = project_capped_simplex(x + params.jitter * rng.random(x.shape), mask)

    current = relaxed_utility(x, rates, frames)
    trace = [current]
    step = params.step_size
    converged = False
    iterations = 0

    while iterations < params.max_iters:
        iterations += 1
        grad = relaxed_gradient(x, rates, frames)
        while True:
            candidate = project_capped_simplex(x + step * grad, mask)
            value = relaxed_utility(candidate, rates, frames)
            if value >= current or step < _STEP_FLOOR:
                break
            step /= 2.0
        if value < current:
            # no ascent direction left at machine precision
            converged = True
            break
        gain = value - current
        x, current = candidate, value
        trace.append(current)
        if gain < params.tol:
            converged = True
            break
        step = min(step * _STEP_GROWTH, params.step_size * _STEP_CAP)

    if not converged:
        logger.warning("relaxed_not_converged", iterations=iterations, utility=current)

    x = _renormalise(np.where(x < params.projection_tol, 0.0, x), mask)
    final = relaxed_utility(x, rates, frames)
    logger.debug("relaxed_solved", iterations=iterations, utility=final, converged=converged)
    return RelaxedSolution(
        x=x,
        utility=final,
        iterations=iterations,
        converged=converged,
        trace=trace,
    )
