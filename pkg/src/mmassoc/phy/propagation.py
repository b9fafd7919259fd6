"""Geometry to PHY rates: Friis path loss, wall attenuation and MCS lookup.

Links are treated as interference-free point-to-point channels, so a rate
depends only on its own link's geometry. Antennas contribute their boresight
gain at both ends.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from mmassoc.core.errors import InfeasibleInstanceError
from mmassoc.core.types import FloatArray, RateMatrix
from mmassoc.phy.radio import RadioConfig, Wall
from mmassoc.utils.logging import get_logger

if TYPE_CHECKING:
    from mmassoc.scenario.topology import Topology

logger = get_logger(__name__)

SPEED_OF_LIGHT = 299_792_458.0

Point = tuple[float, float] | Sequence[float] | npt.NDArray[np.float64]


def fspl_db(distance_m: float | FloatArray, frequency_hz: float) -> float | FloatArray:
    """Free-space path loss 20 log10(4 pi d f / c)."""
    return 20.0 * np.log10(4.0 * math.pi * np.asarray(distance_m) * frequency_hz / SPEED_OF_LIGHT)


def segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Strict intersection of segments ab and cd.

    Touching an endpoint or running collinear does not count as a crossing.
    """
    d1 = (d[0] - c[0]) * (a[1] - c[1]) - (d[1] - c[1]) * (a[0] - c[0])
    d2 = (d[0] - c[0]) * (b[1] - c[1]) - (d[1] - c[1]) * (b[0] - c[0])
    d3 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    d4 = (b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0])
    return bool(d1 * d2 < 0 and d3 * d4 < 0)


def _wall_loss_matrix(clients: FloatArray, aps: FloatArray, walls: Sequence[Wall]) -> FloatArray:
    """Total attenuation (dB) of the walls crossed by every client-AP segment."""
    loss = np.zeros((clients.shape[0], aps.shape[0]), dtype=np.float64)
    px = clients[:, 0][:, np.newaxis]
    py = clients[:, 1][:, np.newaxis]
    qx = aps[:, 0][np.newaxis, :]
    qy = aps[:, 1][np.newaxis, :]
    for wall in walls:
        (cx, cy), (dx, dy) = wall.start, wall.end
        # sides of the link endpoints relative to the wall
        d1 = (dx - cx) * (py - cy) - (dy - cy) * (px - cx)
        d2 = (dx - cx) * (qy - cy) - (dy - cy) * (qx - cx)
        # sides of the wall endpoints relative to the link
        d3 = (qx - px) * (cy - py) - (qy - py) * (cx - px)
        d4 = (qx - px) * (dy - py) - (qy - py) * (dx - px)
        crossed = (d1 * d2 < 0) & (d3 * d4 < 0)
        loss += np.where(crossed, wall.attenuation_db, 0.0)
    return loss


@dataclass(frozen=True)
class LinkBudget:
    """SNR of one client-AP link plus the terms that produced it."""

    snr_db: float
    distance_m: float
    path_loss_db: float
    wall_loss_db: float
    walls_crossed: int
    clamped: bool


def link_snr(
    client_pos: Point,
    ap_pos: Point,
    walls: Sequence[Wall],
    radio: RadioConfig,
) -> LinkBudget:
    """Link SNR in dB; distances below ``radio.min_distance_m`` are clamped."""
    distance = math.dist((float(client_pos[0]), float(client_pos[1])), (float(ap_pos[0]), float(ap_pos[1])))
    clamped = distance < radio.min_distance_m
    effective = max(distance, radio.min_distance_m)
    path_loss = float(fspl_db(effective, radio.carrier_frequency_hz))
    crossed = [w for w in walls if segments_cross(client_pos, ap_pos, w.start, w.end)]
    wall_loss = float(sum(w.attenuation_db for w in crossed))
    snr = (
        radio.tx_power_dbm
        + 2.0 * radio.antenna_gain_dbi
        - path_loss
        - wall_loss
        - radio.noise_floor_dbm
    )
    return LinkBudget(
        snr_db=snr,
        distance_m=distance,
        path_loss_db=path_loss,
        wall_loss_db=wall_loss,
        walls_crossed=len(crossed),
        clamped=clamped,
    )


def snr_to_rate(snr_db: float | FloatArray, radio: RadioConfig) -> float | FloatArray:
    """Highest MCS rate whose threshold is <= snr (closed lower bound); 0 below all."""
    thresholds = np.array([m.min_snr_db for m in radio.mcs_table], dtype=np.float64)
    table = np.concatenate(([0.0], [m.rate_bps for m in radio.mcs_table]))
    tier = np.searchsorted(thresholds, np.asarray(snr_db, dtype=np.float64), side="right")
    rate = table[tier]
    if np.ndim(rate) == 0:
        return float(rate)
    return np.asarray(rate, dtype=np.float64)


def snr_matrix(topology: Topology, radio: RadioConfig) -> FloatArray:
    """SNR (dB) for every client-AP pair."""
    clients = topology.client_positions
    aps = topology.ap_positions
    distance = np.hypot(
        clients[:, 0][:, np.newaxis] - aps[:, 0][np.newaxis, :],
        clients[:, 1][:, np.newaxis] - aps[:, 1][np.newaxis, :],
    )
    clamped = distance < radio.min_distance_m
    if np.any(clamped):
        pairs = np.argwhere(clamped).tolist()
        logger.warning("distance_clamped", pairs=pairs, min_distance_m=radio.min_distance_m)
    path_loss = np.asarray(
        fspl_db(np.maximum(distance, radio.min_distance_m), radio.carrier_frequency_hz)
    )
    wall_loss = _wall_loss_matrix(clients, aps, topology.walls)
    return (
        radio.tx_power_dbm
        + 2.0 * radio.antenna_gain_dbi
        - path_loss
        - wall_loss
        - radio.noise_floor_dbm
    )


def rate_matrix(topology: Topology, radio: RadioConfig) -> RateMatrix:
    """Achievable PHY rate r_ij for every client-AP pair.

    Raises:
        InfeasibleInstanceError: a client has no AP within coverage.
    """
    rates = np.asarray(snr_to_rate(snr_matrix(topology, radio), radio), dtype=np.float64)
    uncovered = np.flatnonzero(~np.any(rates > 0, axis=1))
    if uncovered.size:
        client = int(uncovered[0])
        x, y = topology.client_positions[client]
        raise InfeasibleInstanceError(client, f"position ({x:.2f}, {y:.2f}) m")
    return rates
