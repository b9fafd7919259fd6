"""Propagation and rate-adaptation model for 60 GHz links."""

from mmassoc.phy.propagation import (
    LinkBudget,
    fspl_db,
    link_snr,
    rate_matrix,
    segments_cross,
    snr_matrix,
    snr_to_rate,
)
from mmassoc.phy.radio import DEFAULT_RATES_BPS, McsEntry, RadioConfig, Wall, default_mcs_table

__all__ = [
    "DEFAULT_RATES_BPS",
    "LinkBudget",
    "McsEntry",
    "RadioConfig",
    "Wall",
    "default_mcs_table",
    "fspl_db",
    "link_snr",
    "rate_matrix",
    "segments_cross",
    "snr_matrix",
    "snr_to_rate",
]
