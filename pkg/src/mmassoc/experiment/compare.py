"""Paired comparison of two policies from a finished run."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from mmassoc.config.settings import settings
from mmassoc.core.errors import ComparisonError
from mmassoc.core.types import FloatArray

PAIR_KEYS = ["run_id", "seed", "snapshot"]
METRICS = ["aggregate_bps", "utility_nats"]


def bootstrap_ci(
    values: FloatArray,
    samples: int,
    rng: np.random.Generator,
    level: float = 0.95,
) -> tuple[float, float]:
    """Percentile bootstrap interval of the mean."""
    data = np.asarray(values, dtype=np.float64)
    if data.size == 0:
        return float("nan"), float("nan")
    draws = rng.integers(0, data.size, size=(samples, data.size))
    means = data[draws].mean(axis=1)
    tail = (1.0 - level) / 2.0
    low, high = np.quantile(means, [tail, 1.0 - tail])
    return float(low), float(high)


@dataclass
class Comparison:
    """Paired deltas (candidate minus baseline) per metric."""

    baseline: str
    candidate: str
    cells: int
    table: pd.DataFrame
    demand_met: dict[str, float]


def _read(results_path: Path) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Per-client results and the summary written next to them."""
    path = Path(results_path)
    if path.is_dir():
        path = path / "results.csv"
    results = pd.read_csv(path)
    summary = pd.read_csv(path.with_name("summary.csv"))
    return results, summary


def _demand_met(results: pd.DataFrame, label: str) -> float:
    rows = results[(results["policy"] == label) & results["demand_bps"].notna()]
    if rows.empty:
        return float("nan")
    return float(rows["satisfied"].mean())


def compare(
    results_path: Path,
    baseline: str,
    candidate: str,
    samples: int | None = None,
    seed: int = 0,
) -> Comparison:
    """Mean, median and bootstrap CI of per-cell deltas, plus demand-met fractions."""
    results, summary = _read(results_path)
    available = sorted(summary["policy"].unique())
    for label in (baseline, candidate):
        if label not in available:
            raise ComparisonError(label, available)

    base = summary[summary["policy"] == baseline].set_index(PAIR_KEYS)[METRICS]
    cand = summary[summary["policy"] == candidate].set_index(PAIR_KEYS)[METRICS]
    paired = cand.join(base, how="inner", lsuffix="_cand", rsuffix="_base").sort_index()

    rng = np.random.default_rng(seed)
    n_samples = samples if samples is not None else settings.runner.bootstrap_samples
    rows = []
    for metric in METRICS:
        delta = (paired[f"{metric}_cand"] - paired[f"{metric}_base"]).to_numpy(dtype=np.float64)
        low, high = bootstrap_ci(delta, n_samples, rng)
        rows.append(
            {
                "metric": metric,
                "mean": float(delta.mean()) if delta.size else float("nan"),
                "median": float(np.median(delta)) if delta.size else float("nan"),
                "ci_low": low,
                "ci_high": high,
            }
        )

    return Comparison(
        baseline=baseline,
        candidate=candidate,
        cells=len(paired),
        table=pd.DataFrame(rows, columns=["metric", "mean", "median", "ci_low", "ci_high"]),
        demand_met={label: _demand_met(results, label) for label in (baseline, candidate)},
    )
