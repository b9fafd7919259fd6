"""Domain types and unit conventions.

Units: rates and throughputs in bits/s, times in seconds, utilities in nats.
Matrices are client-major: N rows (clients) by M columns (APs).
Airtimes are fractions of an AP's data-transmission interval T_j - O_j.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, TypeAlias

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

from mmassoc.core.errors import InfeasibleInstanceError

FloatArray: TypeAlias = npt.NDArray[np.float64]
IntArray: TypeAlias = npt.NDArray[np.int64]

RateMatrix: TypeAlias = FloatArray
Association: TypeAlias = FloatArray
FractionalAssociation: TypeAlias = FloatArray
AirtimeAllocation: TypeAlias = FloatArray
# ``None`` is the saturated (backlogged) marker.
DemandVector: TypeAlias = FloatArray | None

TOL = 1e-9


class FrameConfig(BaseModel):
    """Beacon interval (super-frame) of one AP."""

    model_config = ConfigDict(frozen=True)

    superframe_s: float = Field(default=0.1, gt=0)
    overhead_s: float = Field(default=0.01, gt=0)

    @model_validator(mode="after")
    def _overhead_inside_frame(self) -> "FrameConfig":
        if self.overhead_s >= self.superframe_s:
            raise ValueError("overhead_s must be smaller than superframe_s")
        return self

    @property
    def data_interval_s(self) -> float:
        """Seconds available for data transmission, T - O."""
        return self.superframe_s - self.overhead_s

    @property
    def efficiency(self) -> float:
        """h = (T - O) / T."""
        return self.data_interval_s / self.superframe_s


Frames: TypeAlias = FrameConfig | Sequence[FrameConfig]


def frame_vectors(frames: Frames, n_aps: int) -> tuple[FloatArray, FloatArray]:
    """Per-AP efficiency h_j and data interval T_j - O_j.

    A single FrameConfig applies to every AP.
    """
    if isinstance(frames, FrameConfig):
        per_ap = [frames] * n_aps
    else:
        per_ap = list(frames)
        if len(per_ap) != n_aps:
            raise ValueError(f"expected {n_aps} frame configs, got {len(per_ap)}")
    h = np.array([f.efficiency for f in per_ap], dtype=np.float64)
    data = np.array([f.data_interval_s for f in per_ap], dtype=np.float64)
    return h, data


def efficiencies(frames: Frames, n_aps: int) -> FloatArray:
    return frame_vectors(frames, n_aps)[0]


def validate_rates(rates: npt.ArrayLike) -> RateMatrix:
    """Coerce and check a rate matrix; every client needs a feasible AP."""
    r = np.asarray(rates, dtype=np.float64)
    if r.ndim != 2 or r.shape[0] < 1 or r.shape[1] < 1:
        raise ValueError(f"rate matrix must be 2-D with N, M >= 1, got shape {r.shape}")
    if not np.all(np.isfinite(r)):
        raise ValueError("rate matrix has non-finite entries")
    if np.any(r < 0):
        raise ValueError("rate matrix has negative entries")
    uncovered = np.flatnonzero(~np.any(r > 0, axis=1))
    if uncovered.size:
        raise InfeasibleInstanceError(int(uncovered[0]))
    return r


def one_hot(choices: Sequence[int] | IntArray, n_aps: int) -> Association:
    """Association matrix from a per-client AP index vector."""
    idx = np.asarray(choices, dtype=np.int64)
    x = np.zeros((idx.size, n_aps), dtype=np.float64)
    x[np.arange(idx.size), idx] = 1.0
    return x


def ap_of(x: Association) -> IntArray:
    """Per-client AP index of an association matrix."""
    return np.argmax(x, axis=1).astype(np.int64)


def validate_association(x: npt.ArrayLike, rates: RateMatrix) -> Association:
    a = np.asarray(x, dtype=np.float64)
    if a.shape != rates.shape:
        raise ValueError(f"association shape {a.shape} != rate shape {rates.shape}")
    if not np.all((a == 0.0) | (a == 1.0)):
        raise ValueError("association entries must be 0 or 1")
    if not np.all(a.sum(axis=1) == 1.0):
        raise ValueError("every client must be associated to exactly one AP")
    if np.any((a == 1.0) & (rates <= 0)):
        raise ValueError("association uses an infeasible link")
    return a


def validate_fractional(xf: npt.ArrayLike, rates: RateMatrix, tol: float = TOL) -> FractionalAssociation:
    a = np.asarray(xf, dtype=np.float64)
    if a.shape != rates.shape:
        raise ValueError(f"fractional association shape {a.shape} != rate shape {rates.shape}")
    if np.any(a < -tol) or np.any(a > 1 + tol):
        raise ValueError("fractional association entries must lie in [0, 1]")
    if np.any(a.sum(axis=1) > 1 + tol):
        raise ValueError("fractional association row sums must be <= 1")
    if np.any((a > 0) & (rates <= 0)):
        raise ValueError("fractional association puts mass on an infeasible link")
    return a


@dataclass
class SolveReport:
    """Outcome of one policy/solver invocation."""

    utility: float
    per_client_throughput: FloatArray
    aggregate_throughput: float
    iterations: int = 0
    wall_time: float = 0.0
    policy_name: str = ""
    seed: int = 0
    converged: bool = True
    metadata: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_throughput(
        cls,
        throughput: FloatArray,
        utility: float,
        **kwargs: Any,
    ) -> "SolveReport":
        """Build a report whose aggregate is the exact sum of per-client throughputs."""
        per_client = np.asarray(throughput, dtype=np.float64)
        return cls(
            utility=float(utility),
            per_client_throughput=per_client,
            aggregate_throughput=float(per_client.sum()),
            **kwargs,
        )
