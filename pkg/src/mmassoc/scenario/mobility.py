"""Random-waypoint mobility with periodic position snapshots."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from mmassoc.core.types import FloatArray
from mmassoc.scenario.topology import Box, in_box

Range = tuple[float, float]


class MobilityParams(BaseModel):
    """Pause/walk phase distributions and the snapshot schedule."""

    model_config = ConfigDict(frozen=True)

    speed_mps: Range = (0.2, 2.2)
    pause_s: Range = (1.0, 20.0)
    walk_s: Range = (1.0, 5.0)
    horizon_s: float = Field(default=100.0, gt=0)
    snapshot_period_s: float = Field(default=10.0, gt=0)
    box: Box = ((7.0, 23.0), (7.0, 16.0))

    @model_validator(mode="after")
    def _ranges_ordered(self) -> "MobilityParams":
        for name in ("speed_mps", "pause_s", "walk_s"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise ValueError(f"{name} must satisfy 0 < min <= max, got ({lo}, {hi})")
        (x0, x1), (y0, y1) = self.box
        if not (x0 < x1 and y0 < y1):
            raise ValueError("box must have positive width and height")
        if self.snapshot_period_s > self.horizon_s:
            raise ValueError("snapshot_period_s cannot exceed horizon_s")
        return self

    def snapshot_times(self) -> FloatArray:
        """period, 2*period, ... up to the horizon."""
        count = int(np.floor(self.horizon_s / self.snapshot_period_s + 1e-9))
        return self.snapshot_period_s * np.arange(1, count + 1, dtype=np.float64)


def _trajectory(
    start: FloatArray,
    params: MobilityParams,
    rng: np.random.Generator,
) -> tuple[FloatArray, FloatArray]:
    """Knot times and positions of one client's piecewise-linear path."""
    (x0, x1), (y0, y1) = params.box
    times = [0.0]
    points = [start.copy()]
    now = 0.0
    pos = start.copy()
    while now < params.horizon_s:
        now += rng.uniform(*params.pause_s)
        times.append(now)
        points.append(pos.copy())
        if now >= params.horizon_s:
            break
        waypoint = np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])
        speed = rng.uniform(*params.speed_mps)
        walk = rng.uniform(*params.walk_s)
        gap = float(np.linalg.norm(waypoint - pos))
        travel = min(gap, speed * walk)
        if gap > 0:
            pos = pos + (waypoint - pos) * (travel / gap)
        # arrival before the walk expires: wait at the waypoint
        times.append(now + travel / speed)
        points.append(pos.copy())
        now += walk
        times.append(now)
        points.append(pos.copy())
    return np.asarray(times), np.vstack(points)


def random_waypoint(
    initial: FloatArray,
    params: MobilityParams,
    rng: np.random.Generator,
) -> list[FloatArray]:
    """Client positions at every snapshot time.

    Each client draws from its own child stream, so a client's path does not
    depend on how many other clients exist.
    """
    start = np.asarray(initial, dtype=np.float64).reshape(-1, 2)
    if not np.all(in_box(start, params.box)):
        raise ValueError("initial positions must lie inside the movement box")
    at = params.snapshot_times()
    snapshots = np.empty((at.size, start.shape[0], 2), dtype=np.float64)
    for i, child in enumerate(rng.spawn(start.shape[0])):
        times, points = _trajectory(start[i], params, child)
        snapshots[:, i, 0] = np.interp(at, times, points[:, 0])
        snapshots[:, i, 1] = np.interp(at, times, points[:, 1])
    return [snapshots[k] for k in range(at.size)]
