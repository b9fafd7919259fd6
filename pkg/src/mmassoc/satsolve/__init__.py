"""Association under saturation: concave relaxation plus rounding."""

from mmassoc.satsolve.relaxed import (
    RelaxedSolution,
    RelaxedSolverParams,
    project_capped_simplex,
    relaxed_gradient,
    relaxed_utility,
    solve_relaxed,
)
from mmassoc.satsolve.rounding import iterative_rounding, round_iterative, round_ml
from mmassoc.satsolve.solver import solve_saturation

__all__ = [
    "RelaxedSolution",
    "RelaxedSolverParams",
    "iterative_rounding",
    "project_capped_simplex",
    "relaxed_gradient",
    "relaxed_utility",
    "round_iterative",
    "round_ml",
    "solve_relaxed",
    "solve_saturation",
]
