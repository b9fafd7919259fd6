"""Deployments: AP grids, client placement, partition walls, topology files."""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from mmassoc.core.errors import ConfigError
from mmassoc.core.types import FloatArray
from mmassoc.phy.radio import Wall

Area = tuple[float, float]
Box = tuple[tuple[float, float], tuple[float, float]]

_EDGE_TOL = 1e-9
_MAX_REJECTION_ROUNDS = 1000
MIN_COMPONENT_MASS = 1e-2


def in_box(points: FloatArray, box: Box, tol: float = _EDGE_TOL) -> npt.NDArray[np.bool_]:
    (x0, x1), (y0, y1) = box
    return (
        (points[:, 0] >= x0 - tol)
        & (points[:, 0] <= x1 + tol)
        & (points[:, 1] >= y0 - tol)
        & (points[:, 1] <= y1 + tol)
    )


def area_box(area: Area) -> Box:
    return ((0.0, float(area[0])), (0.0, float(area[1])))


@dataclass(frozen=True, eq=False)
class Topology:
    """AP and client positions (metres) inside a rectangular area."""

    area: Area
    ap_positions: FloatArray
    client_positions: FloatArray
    walls: tuple[Wall, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        aps = np.asarray(self.ap_positions, dtype=np.float64).reshape(-1, 2)
        clients = np.asarray(self.client_positions, dtype=np.float64).reshape(-1, 2)
        object.__setattr__(self, "ap_positions", aps)
        object.__setattr__(self, "client_positions", clients)
        object.__setattr__(self, "walls", tuple(self.walls))
        if self.area[0] <= 0 or self.area[1] <= 0:
            raise ValueError(f"area must be positive, got {self.area}")
        if aps.shape[0] < 1 or clients.shape[0] < 1:
            raise ValueError("a topology needs at least one AP and one client")
        box = area_box(self.area)
        if not np.all(in_box(aps, box)) or not np.all(in_box(clients, box)):
            raise ValueError("all AP and client positions must lie inside the area")

    @property
    def n_clients(self) -> int:
        return int(self.client_positions.shape[0])

    @property
    def n_aps(self) -> int:
        return int(self.ap_positions.shape[0])

    def with_clients(self, positions: FloatArray) -> "Topology":
        """Same deployment with clients moved (e.g. a mobility snapshot)."""
        return replace(self, client_positions=np.asarray(positions, dtype=np.float64))

    def distances(self) -> FloatArray:
        """Client-AP Euclidean distances, N x M."""
        diff = self.client_positions[:, np.newaxis, :] - self.ap_positions[np.newaxis, :, :]
        return np.asarray(np.hypot(diff[..., 0], diff[..., 1]), dtype=np.float64)


def grid_aps(area: Area, rows: int, cols: int) -> FloatArray:
    """Evenly spaced AP grid with half-cell margins, row-major from the origin."""
    if rows < 1 or cols < 1:
        raise ValueError(f"grid needs at least one row and column, got {rows}x{cols}")
    width, height = area
    xs = (np.arange(cols) + 0.5) * width / cols
    ys = (np.arange(rows) + 0.5) * height / rows
    return np.array([(x, y) for y in ys for x in xs], dtype=np.float64)


def uniform_in_box(box: Box, n: int, rng: np.random.Generator) -> FloatArray:
    (x0, x1), (y0, y1) = box
    return np.column_stack((rng.uniform(x0, x1, size=n), rng.uniform(y0, y1, size=n)))


def uniform_clients(area: Area, n: int, rng: np.random.Generator) -> FloatArray:
    return uniform_in_box(area_box(area), n, rng)


class GaussianComponent(BaseModel):
    """One bump of the client density, truncated to the deployment area."""

    model_config = ConfigDict(frozen=True)

    center: tuple[float, float]
    cov: tuple[tuple[float, float], tuple[float, float]] = ((9.0, 0.0), (0.0, 9.0))
    weight: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _positive_definite(self) -> "GaussianComponent":
        c = np.asarray(self.cov, dtype=np.float64)
        if not np.allclose(c, c.T) or np.any(np.linalg.eigvalsh(c) <= 0):
            raise ValueError("cov must be symmetric positive definite")
        return self

    def mass_bound(self, area: Area) -> float:
        """Upper bound on the probability mass inside ``area``: the smaller marginal mass."""
        bound = 1.0
        for axis, extent in enumerate(area):
            scale = math.sqrt(2.0 * self.cov[axis][axis])
            mu = self.center[axis]
            bound = min(bound, 0.5 * (math.erf((extent - mu) / scale) - math.erf(-mu / scale)))
        return bound


class ClientDensity(BaseModel):
    """Gaussian mixture plus a uniform floor, so no position has zero probability."""

    model_config = ConfigDict(frozen=True)

    components: list[GaussianComponent] = Field(default_factory=list)
    floor_weight: float = Field(default=0.05, ge=0, le=1)

    def mixture_weights(self) -> FloatArray:
        """Probabilities of [component_0, ..., component_k, floor]."""
        if not self.components:
            return np.array([1.0])
        raw = np.array([c.weight for c in self.components], dtype=np.float64)
        comp = (1.0 - self.floor_weight) * raw / raw.sum()
        return np.append(comp, self.floor_weight)


def _truncated_gaussian(
    component: GaussianComponent,
    area: Area,
    n: int,
    rng: np.random.Generator,
) -> FloatArray:
    accepted: list[FloatArray] = []
    missing = n
    box = area_box(area)
    rounds = 0
    while missing > 0:
        if rounds == _MAX_REJECTION_ROUNDS:
            raise ConfigError(
                f"density component centred at {component.center} has negligible mass inside the area"
            )
        rounds += 1
        draw = rng.multivariate_normal(component.center, component.cov, size=max(2 * missing, 16))
        inside = draw[in_box(draw, box, tol=0.0)][:missing]
        accepted.append(inside)
        missing -= inside.shape[0]
    if not accepted:
        return np.empty((0, 2), dtype=np.float64)
    return np.vstack(accepted)


def sample_clients_pmf(
    density: ClientDensity,
    area: Area,
    n: int,
    rng: np.random.Generator,
) -> FloatArray:
    """Draw ``n`` independent client positions from ``density`` over ``area``."""
    weights = density.mixture_weights()
    which = rng.choice(weights.size, size=n, p=weights)
    positions = np.empty((n, 2), dtype=np.float64)
    for k, component in enumerate(density.components):
        idx = np.flatnonzero(which == k)
        if idx.size:
            positions[idx] = _truncated_gaussian(component, area, idx.size, rng)
    floor = np.flatnonzero(which == weights.size - 1)
    if floor.size:
        positions[floor] = uniform_clients(area, floor.size, rng)
    return positions


def office_partitions(
    area: Area,
    x_splits: Sequence[float] = (),
    y_splits: Sequence[float] = (),
    attenuation_db: float = 10.0,
    door_width: float = 1.0,
) -> list[Wall]:
    """Partition walls across the whole area, each with a centred door gap."""
    width, height = area
    walls: list[Wall] = []

    def _split(fixed: float, length: float, vertical: bool) -> None:
        half_gap = min(door_width, length) / 2.0
        mid = length / 2.0
        pieces = [(0.0, mid - half_gap), (mid + half_gap, length)]
        for lo, hi in pieces:
            if hi - lo <= 0:
                continue
            if vertical:
                walls.append(Wall(start=(fixed, lo), end=(fixed, hi), attenuation_db=attenuation_db))
            else:
                walls.append(Wall(start=(lo, fixed), end=(hi, fixed), attenuation_db=attenuation_db))

    for x in x_splits:
        if not 0 < x < width:
            raise ValueError(f"x split {x} outside the area")
        _split(float(x), height, vertical=True)
    for y in y_splits:
        if not 0 < y < height:
            raise ValueError(f"y split {y} outside the area")
        _split(float(y), width, vertical=False)
    return walls


def demands_uniform(n: int, low_bps: float, high_bps: float, rng: np.random.Generator) -> FloatArray:
    """Offered loads drawn uniformly in [low, high] bits/s."""
    if not 0 < low_bps <= high_bps:
        raise ValueError("demand range must satisfy 0 < low <= high")
    return rng.uniform(low_bps, high_bps, size=n)


_TOPOLOGY_COLUMNS = ["kind", "id", "x", "y", "x2", "y2", "attenuation_db"]


def save_topology(topology: Topology, path: Path) -> None:
    """Write a topology as a tidy CSV (one row per area/AP/client/wall)."""
    rows: list[dict[str, object]] = [
        {"kind": "area", "id": 0, "x": topology.area[0], "y": topology.area[1]}
    ]
    rows += [
        {"kind": "ap", "id": j, "x": x, "y": y} for j, (x, y) in enumerate(topology.ap_positions)
    ]
    rows += [
        {"kind": "client", "id": i, "x": x, "y": y}
        for i, (x, y) in enumerate(topology.client_positions)
    ]
    rows += [
        {
            "kind": "wall",
            "id": k,
            "x": w.start[0],
            "y": w.start[1],
            "x2": w.end[0],
            "y2": w.end[1],
            "attenuation_db": w.attenuation_db,
        }
        for k, w in enumerate(topology.walls)
    ]
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=_TOPOLOGY_COLUMNS).to_csv(path, index=False, float_format="%.17g")


def load_topology(path: Path) -> Topology:
    """Read a topology written by :func:`save_topology`."""
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = set(_TOPOLOGY_COLUMNS) - set(frame.columns)
    if missing:
        raise ValueError(f"{path}: missing columns {sorted(missing)}")

    def _points(kind: str) -> FloatArray:
        part = frame[frame["kind"] == kind].sort_values("id")
        return part[["x", "y"]].to_numpy(dtype=np.float64)

    area_rows = frame[frame["kind"] == "area"]
    if len(area_rows) != 1:
        raise ValueError(f"{path}: expected exactly one area row")
    area = (float(area_rows["x"].iloc[0]), float(area_rows["y"].iloc[0]))
    walls = [
        Wall(
            start=(float(row.x), float(row.y)),
            end=(float(row.x2), float(row.y2)),
            attenuation_db=float(row.attenuation_db),
        )
        for row in frame[frame["kind"] == "wall"].sort_values("id").itertuples()
    ]
    return Topology(
        area=area,
        ap_positions=_points("ap"),
        client_positions=_points("client"),
        walls=tuple(walls),
    )
