"""Simulated annealing over associations, with water-filled airtime as the inner step."""

import asyncio
import math
import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from mmassoc.baselines.association import associate_minmax_load
from mmassoc.core.errors import DegenerateAllocationError
from mmassoc.core.metrics import diagnostic_utility, satisfied, throughput
from mmassoc.core.types import (
    AirtimeAllocation,
    Association,
    FloatArray,
    Frames,
    RateMatrix,
    SolveReport,
    ap_of,
    validate_association,
    validate_rates,
)
from mmassoc.loadsolve.bottleneck import bottlenecks
from mmassoc.loadsolve.repair import pack_demands
from mmassoc.loadsolve.waterfill import finite_utility, water_filling
from mmassoc.utils.logging import get_logger

logger = get_logger(__name__)

Branch = Literal["random", "offload", "rebalance"]


class SAParams(BaseModel):
    """Cooling schedule and perturbation mix."""

    model_config = ConfigDict(frozen=True)

    t0: float = Field(default=20.0, gt=0)
    alpha: float = Field(default=0.7, gt=0, lt=1)
    q: int | None = Field(default=None, gt=0)
    t_min: float = Field(default=1e-3, gt=0)
    p: float = Field(default=0.1, ge=0, le=1)
    seed: int = 0
    # finishing local search when the anneal leaves demand unmet
    pack: bool = True
    kicks: int = Field(default=50, ge=0)

    @model_validator(mode="after")
    def _floor_below_start(self) -> "SAParams":
        if self.t_min >= self.t0:
            raise ValueError("t_min must be smaller than t0")
        return self

    def moves_per_level(self, n_clients: int, n_aps: int) -> int:
        """q, defaulting to ceil(N * M / 2)."""
        return self.q if self.q is not None else math.ceil(n_clients * n_aps / 2)


@dataclass(frozen=True)
class Move:
    """Reassign one client; ``branch`` records which rule produced it."""

    client: int
    source: int
    target: int
    branch: Branch

    def apply(self, x: Association) -> Association:
        moved = x.copy()
        moved[self.client, self.source] = 0.0
        moved[self.client, self.target] = 1.0
        return moved


@dataclass
class AnnealingTrace:
    """One row per candidate move."""

    rows: list[tuple[int, float, float, bool]] = field(default_factory=list)

    def record(self, iteration: int, temperature: float, utility: float, accepted: bool) -> None:
        self.rows.append((iteration, temperature, utility, accepted))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=["iteration", "temperature", "utility", "accepted"])

    def to_csv(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.12g")


def propose_move(
    x: Association,
    t: AirtimeAllocation,
    demand: FloatArray,
    p: float,
    rates: RateMatrix,
    frames: Frames,
    rng: np.random.Generator,
) -> Move | None:
    """Pick one client reassignment, or None when the chosen rule has no legal move.

    With probability ``p`` any client may go to any other AP it can reach.
    Otherwise moves go from bottleneck APs to APs with spare airtime, or, when
    no AP has spare airtime, from a non-minimal AP to one with a strictly
    smaller bottleneck score. The client is drawn uniformly among those with a
    legal target, then the target uniformly among that client's options.
    """
    feasible = rates > 0
    current = ap_of(x)
    branch: Branch
    if rng.random() < p:
        branch = "random"
        legal = feasible & (x == 0)
    else:
        report = bottlenecks(x, t, rates, frames, demand)
        if report.minus.size:
            branch = "offload"
            has_room = np.zeros(rates.shape[1], dtype=bool)
            has_room[report.minus] = True
            on_bottleneck = np.isin(current, report.plus)
            legal = feasible & on_bottleneck[:, np.newaxis] & has_room[np.newaxis, :]
        else:
            branch = "rebalance"
            score = report.score
            own = score[current]
            legal = (
                feasible
                & (own > score.min())[:, np.newaxis]
                & (score[np.newaxis, :] < own[:, np.newaxis])
            )

    movable = np.flatnonzero(legal.any(axis=1))
    if movable.size == 0:
        logger.debug("no_legal_move", branch=branch)
        return None
    client = int(rng.choice(movable))
    target = int(rng.choice(np.flatnonzero(legal[client])))
    return Move(client=client, source=int(current[client]), target=target, branch=branch)


def perturbate(
    x: Association,
    t: AirtimeAllocation,
    demand: FloatArray,
    p: float,
    rates: RateMatrix,
    frames: Frames,
    rng: np.random.Generator,
) -> Association:
    """Apply :func:`propose_move`; the input comes back unchanged if nothing can move."""
    move = propose_move(x, t, demand, p, rates, frames, rng)
    return x.copy() if move is None else move.apply(x)


def _all_satisfied(
    x: Association,
    t: AirtimeAllocation,
    rates: RateMatrix,
    frames: Frames,
    demand: FloatArray,
) -> bool:
    return bool(np.all(satisfied(throughput(x, t, rates, frames), demand)))


def _energy(x: Association, t: AirtimeAllocation, rates: RateMatrix, frames: Frames) -> float:
    try:
        return finite_utility(x, t, rates, frames)
    except DegenerateAllocationError:
        logger.error(
            "degenerate_candidate",
            clients=ap_of(x).tolist(),
            airtime=t.sum(axis=1).tolist(),
            clamped_utility=diagnostic_utility(throughput(x, t, rates, frames)),
        )
        raise


def simulated_annealing(
    x0: Association,
    rates: RateMatrix,
    frames: Frames,
    demand: FloatArray,
    params: SAParams | None = None,
    rng: np.random.Generator | None = None,
    trace: AnnealingTrace | None = None,
) -> tuple[Association, AirtimeAllocation, SolveReport]:
    """Anneal the association, scoring every candidate with water-filled utility.

    The temperature falls as T <- T * alpha**v after the v-th level, and each
    level tries q moves. The run stops early once every client is served its
    full demand. The best association seen is returned.

    If demand is still unmet at the end and ``params.pack`` is set, a local
    search that packs required airtime under each AP's budget is run from the
    best association and from the min-max utilisation start. Its result
    replaces the best only when its utility is higher.
    """
    params = params or SAParams()
    rng = rng if rng is not None else np.random.default_rng(params.seed)
    rates = validate_rates(rates)
    demand = np.asarray(demand, dtype=np.float64)
    started = time.perf_counter()

    x = validate_association(x0, rates)
    t = water_filling(x, rates, frames, demand)
    energy = _energy(x, t, rates, frames)
    initial = energy
    best_x, best_t, best_energy = x, t, energy

    moves_per_level = params.moves_per_level(*rates.shape)
    temperature = params.t0
    levels = 0
    perturbations = 0
    accepted_moves = 0
    done = _all_satisfied(x, t, rates, frames, demand)

    while temperature > params.t_min and not done:
        levels += 1
        for _ in range(moves_per_level):
            perturbations += 1
            move = propose_move(x, t, demand, params.p, rates, frames, rng)
            if move is None:
                if trace is not None:
                    trace.record(perturbations, temperature, energy, False)
                continue

            cand_x = move.apply(x)
            cand_t = water_filling(cand_x, rates, frames, demand)
            cand_energy = _energy(cand_x, cand_t, rates, frames)
            delta = cand_energy - energy
            accepted = delta >= 0 or rng.random() < math.exp(delta / temperature)
            if accepted:
                accepted_moves += 1
                x, t, energy = cand_x, cand_t, cand_energy
                if energy > best_energy:
                    best_x, best_t, best_energy = x, t, energy
            if trace is not None:
                trace.record(perturbations, temperature, energy, accepted)
            if accepted and _all_satisfied(x, t, rates, frames, demand):
                done = True
                break
        temperature *= params.alpha**levels
        logger.debug("annealing_level", level=levels, temperature=temperature, best=best_energy)

    packed = False
    if params.pack and not done:
        for start in (best_x, associate_minmax_load(rates, demand)):
            cand_x = pack_demands(start, rates, frames, demand, rng, params.kicks)
            cand_t = water_filling(cand_x, rates, frames, demand)
            cand_energy = _energy(cand_x, cand_t, rates, frames)
            if cand_energy > best_energy:
                best_x, best_t, best_energy = cand_x, cand_t, cand_energy
                packed = True
            if _all_satisfied(best_x, best_t, rates, frames, demand):
                break

    report = SolveReport.from_throughput(
        throughput(best_x, best_t, rates, frames),
        best_energy,
        iterations=perturbations,
        wall_time=time.perf_counter() - started,
        seed=params.seed,
        metadata={
            "temperature_levels": levels,
            "perturbations": perturbations,
            "accepted": accepted_moves,
            "early_exit": done,
            "packed": packed,
            "initial_utility": initial,
        },
    )
    logger.debug("annealing_done", levels=levels, perturbations=perturbations, utility=best_energy)
    return best_x, best_t, report


async def anneal_restarts(
    x0: Association,
    rates: RateMatrix,
    frames: Frames,
    demand: FloatArray,
    params: SAParams | None = None,
    seeds: Sequence[int] = (0,),
    threads: int = 1,
) -> tuple[Association, AirtimeAllocation, SolveReport]:
    """Independent annealing runs, one per seed; the highest utility wins.

    Ties go to the earliest seed in ``seeds``, so the result does not depend on
    ``threads``.
    """
    if not seeds:
        raise ValueError("anneal_restarts needs at least one seed")
    params = params or SAParams()
    gate = asyncio.Semaphore(max(1, threads))

    async def _one(seed: int) -> tuple[Association, AirtimeAllocation, SolveReport]:
        async with gate:
            run_params = params.model_copy(update={"seed": seed})
            return await asyncio.to_thread(
                simulated_annealing,
                x0,
                rates,
                frames,
                demand,
                run_params,
                np.random.default_rng(seed),
            )

    results = await asyncio.gather(*(_one(seed) for seed in seeds))
    best = max(range(len(results)), key=lambda k: (results[k][2].utility, -k))
    x, t, report = results[best]
    report.metadata["restart_seed"] = seeds[best]
    report.metadata["restarts"] = len(seeds)
    return x, t, report
