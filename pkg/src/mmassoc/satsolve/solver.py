"""Backlogged-traffic association: relax, solve, round."""

import time

import numpy as np

from mmassoc.core.metrics import equal_airtime, saturation_utility, throughput
from mmassoc.core.types import Association, Frames, RateMatrix, SolveReport, validate_rates
from mmassoc.satsolve.relaxed import RelaxedSolverParams, solve_relaxed
from mmassoc.satsolve.rounding import iterative_rounding
from mmassoc.utils.logging import get_logger

logger = get_logger(__name__)


def solve_saturation(
    rates: RateMatrix,
    frames: Frames,
    params: RelaxedSolverParams | None = None,
    rng: np.random.Generator | None = None,
    deterministic: bool = False,
) -> tuple[Association, SolveReport]:
    """Relaxed solve followed by iterative rounding, reported under equal airtime."""
    rates = validate_rates(rates)
    started = time.perf_counter()

    relaxed = solve_relaxed(rates, frames, params, rng=rng)
    x, steps = iterative_rounding(relaxed.x, rates, rng=rng, deterministic=deterministic)

    served = throughput(x, equal_airtime(x), rates, frames)
    report = SolveReport.from_throughput(
        served,
        saturation_utility(x, rates, frames),
        iterations=relaxed.iterations,
        wall_time=time.perf_counter() - started,
        converged=relaxed.converged,
        metadata={
            "relaxed_utility": relaxed.utility,
            "rounding_steps": steps,
        },
    )
    logger.debug(
        "saturation_solved",
        utility=report.utility,
        relaxed_utility=relaxed.utility,
        iterations=relaxed.iterations,
    )
    return x, report
