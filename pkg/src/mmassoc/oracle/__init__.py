"""Exhaustive optima and numerical checks used as ground truth."""

from mmassoc.oracle.exhaustive import candidate_count, exhaustive_finite, exhaustive_saturation
from mmassoc.oracle.gradient import gradient_check

__all__ = ["candidate_count", "exhaustive_finite", "exhaustive_saturation", "gradient_check"]
