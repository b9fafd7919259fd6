"""Comparison association policies."""

from mmassoc.baselines.association import associate_greedy, associate_minmax_load, associate_snr

__all__ = ["associate_greedy", "associate_minmax_load", "associate_snr"]
