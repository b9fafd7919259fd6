"""Main CLI application."""

import asyncio
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, NoReturn

import numpy as np
import pandas as pd
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from mmassoc import __version__
from mmassoc.config.settings import settings
from mmassoc.core.errors import (
    ComparisonError,
    ConfigError,
    InfeasibleInstanceError,
    PolicyError,
    SearchSpaceTooLargeError,
)
from mmassoc.core.types import ap_of
from mmassoc.experiment.compare import compare as compare_results
from mmassoc.experiment.config import (
    PRESETS,
    ExperimentConfig,
    apply_overrides,
    load_config,
    parse_assignments,
    preset,
)
from mmassoc.experiment.instances import Instance, build_instances, make_context
from mmassoc.experiment.runner import run_experiment
from mmassoc.loadsolve.annealing import AnnealingTrace
from mmassoc.oracle.exhaustive import candidate_count, exhaustive_finite, exhaustive_saturation
from mmassoc.policies.base import TrafficMode
from mmassoc.policies.registry import default_registry
from mmassoc.scenario.topology import save_topology
from mmassoc.utils.logging import configure_logging

app = typer.Typer(
    name="mmassoc",
    help="Client association and airtime allocation for mmWave WLANs",
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)

EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_SEARCH_SPACE = 4


def _fail(message: str, code: int) -> NoReturn:
    err_console.print(f"[red]Error:[/red] {escape(message)}", highlight=False)
    raise typer.Exit(code)


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map domain errors onto process exit codes."""
    try:
        yield
    except (ConfigError, ComparisonError, PolicyError) as exc:
        _fail(str(exc), EXIT_USAGE)
    except ValidationError as exc:
        _fail(str(exc), EXIT_USAGE)
    except InfeasibleInstanceError as exc:
        _fail(str(exc), EXIT_INFEASIBLE)
    except SearchSpaceTooLargeError as exc:
        _fail(f"{exc} (raise MMASSOC_ORACLE_MAX_CANDIDATES or --max-candidates)", EXIT_SEARCH_SPACE)


def _solver_overrides(
    deterministic: bool,
    sa_t0: float | None,
    sa_alpha: float | None,
    sa_q: int | None,
    sa_tmin: float | None,
    sa_p: float | None,
    step_size: float | None,
    max_iters: int | None,
) -> dict[str, Any]:
    flags = {
        "annealing.t0": sa_t0,
        "annealing.alpha": sa_alpha,
        "annealing.q": sa_q,
        "annealing.t_min": sa_tmin,
        "annealing.p": sa_p,
        "relaxed.step_size": step_size,
        "relaxed.max_iters": max_iters,
    }
    overrides = {key: value for key, value in flags.items() if value is not None}
    if deterministic:
        overrides["deterministic"] = True
    return overrides


def _load(
    config_path: Path | None,
    scenario: str | None,
    assignments: list[str] | None,
    extra: dict[str, Any],
) -> ExperimentConfig:
    if config_path is not None and scenario is not None:
        raise ConfigError("give either a config file or --scenario, not both")
    if config_path is not None:
        config = load_config(config_path)
    else:
        config = preset(scenario or "enterprise-4ap")
    overrides = parse_assignments(assignments or [])
    overrides.update(extra)
    return apply_overrides(config, overrides)


def _instance(config: ExperimentConfig, seed: int, snapshot: int) -> Instance:
    instances = build_instances(config, seed)
    if not 0 <= snapshot < len(instances):
        raise ConfigError(f"snapshot {snapshot} out of range (0..{len(instances) - 1})")
    return instances[snapshot]


CONFIG_OPTION = typer.Option(None, "--config", "-c", help="Experiment YAML file")
SCENARIO_OPTION = typer.Option(
    None, "--scenario", "-s", help=f"Built-in scenario: {', '.join(sorted(PRESETS))}"
)
SET_OPTION = typer.Option(None, "--set", help="Override a config key, e.g. annealing.t0=10")


@app.callback()
def setup(
    log_level: str | None = typer.Option(
        None, "--log-level", help="DEBUG, INFO, WARNING or ERROR (default from MMASSOC_LOG_LEVEL)"
    ),
) -> None:
    """Client association and airtime allocation for mmWave WLANs."""
    configure_logging(level=log_level)


@app.command()
def generate(
    config_path: Path | None = CONFIG_OPTION,
    scenario: str | None = SCENARIO_OPTION,
    assignments: list[str] | None = SET_OPTION,
    seed: int = typer.Option(0, "--seed", help="Scenario seed"),
    out_dir: Path = typer.Option(Path("instances"), "--out-dir", "-o", help="Output directory"),
) -> None:
    """Write topology, rate matrix and demand CSVs for one seed."""
    with _exit_codes():
        config = _load(config_path, scenario, assignments, {})
        instances = build_instances(config, seed)
        out_dir.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        for inst in instances:
            topo_path = out_dir / f"topology-{seed}-{inst.snapshot}.csv"
            rates_path = out_dir / f"rates-{seed}-{inst.snapshot}.csv"
            save_topology(inst.topology, topo_path)
            columns = [f"ap_{j}" for j in range(inst.rates.shape[1])]
            pd.DataFrame(inst.rates, columns=columns).to_csv(rates_path, index_label="client_id")
            written += [topo_path, rates_path]
        if instances[0].demand is not None:
            demand_path = out_dir / f"demand-{seed}.csv"
            pd.DataFrame({"demand_bps": instances[0].demand}).to_csv(demand_path, index_label="client_id")
            written.append(demand_path)

    for path in written:
        console.print(f"[green][OK][/green] {path}")


@app.command()
def solve(
    config_path: Path | None = CONFIG_OPTION,
    scenario: str | None = SCENARIO_OPTION,
    assignments: list[str] | None = SET_OPTION,
    seed: int = typer.Option(0, "--seed", help="Scenario seed"),
    snapshot: int = typer.Option(0, "--snapshot", help="Mobility snapshot index"),
    policy: str | None = typer.Option(None, "--policy", "-p", help="Policy name (see 'policies')"),
    deterministic: bool = typer.Option(False, "--deterministic", help="Break rounding ties by lowest index"),
    trace: Path | None = typer.Option(None, "--trace", help="Write the annealing trace CSV here"),
    max_candidates: int | None = typer.Option(None, "--max-candidates", help="Oracle size guard"),
    sa_t0: float | None = typer.Option(None, "--sa-t0"),
    sa_alpha: float | None = typer.Option(None, "--sa-alpha"),
    sa_q: int | None = typer.Option(None, "--sa-q"),
    sa_tmin: float | None = typer.Option(None, "--sa-tmin"),
    sa_p: float | None = typer.Option(None, "--sa-p"),
    step_size: float | None = typer.Option(None, "--step-size"),
    max_iters: int | None = typer.Option(None, "--max-iters"),
) -> None:
    """Solve one instance with one policy and print the association."""
    with _exit_codes():
        extra = _solver_overrides(
            deterministic, sa_t0, sa_alpha, sa_q, sa_tmin, sa_p, step_size, max_iters
        )
        config = _load(config_path, scenario, assignments, extra)
        name = policy or ("proposed-sat" if config.mode is TrafficMode.SATURATION else "proposed-sawf")
        instance = _instance(config, seed, snapshot)
        recorder = AnnealingTrace() if trace is not None else None
        context = make_context(config, instance, name, max_candidates=max_candidates, trace=recorder)
        outcome = default_registry().get(name).run(context)

    report = outcome.report
    aps = ap_of(outcome.association)
    table = Table(title=f"{name} | seed {seed} | snapshot {instance.snapshot}")
    table.add_column("client", justify="right")
    table.add_column("AP", justify="right")
    table.add_column("rate (Mb/s)", justify="right")
    table.add_column("airtime", justify="right")
    table.add_column("throughput (Mb/s)", justify="right")
    if instance.demand is not None:
        table.add_column("demand (Mb/s)", justify="right")
    for i, j in enumerate(aps):
        row = [
            str(i),
            str(j),
            f"{instance.rates[i, j] / 1e6:.1f}",
            f"{outcome.airtime[i, j]:.4f}",
            f"{report.per_client_throughput[i] / 1e6:.1f}",
        ]
        if instance.demand is not None:
            row.append(f"{instance.demand[i] / 1e6:.1f}")
        table.add_row(*row)
    console.print(table)
    console.print(
        f"utility [cyan]{report.utility:.6f}[/cyan] nats | "
        f"aggregate [cyan]{report.aggregate_throughput / 1e9:.3f}[/cyan] Gb/s | "
        f"iterations {report.iterations}"
    )
    if trace is not None and recorder is not None:
        if recorder.rows:
            recorder.to_csv(trace)
            console.print(f"[green][OK][/green] trace written to {trace}")
        else:
            console.print("[yellow]No annealing trace recorded for this policy[/yellow]")


@app.command()
def oracle(
    config_path: Path | None = CONFIG_OPTION,
    scenario: str | None = SCENARIO_OPTION,
    assignments: list[str] | None = SET_OPTION,
    seed: int = typer.Option(0, "--seed", help="Scenario seed"),
    snapshot: int = typer.Option(0, "--snapshot", help="Mobility snapshot index"),
    max_candidates: int | None = typer.Option(
        None,
        "--max-candidates",
        help=f"Search size guard (default {settings.oracle.max_candidates}, env MMASSOC_ORACLE_MAX_CANDIDATES)",
    ),
) -> None:
    """Exhaustive optimum of one instance."""
    with _exit_codes():
        config = _load(config_path, scenario, assignments, {})
        instance = _instance(config, seed, snapshot)
        count = candidate_count(instance.rates)
        if instance.demand is None:
            x, value = exhaustive_saturation(instance.rates, config.frames, max_candidates)
        else:
            x, _, value = exhaustive_finite(instance.rates, config.frames, instance.demand, max_candidates)

    console.print(f"candidates [cyan]{count}[/cyan] | optimum [cyan]{value:.6f}[/cyan] nats")
    console.print(f"association {ap_of(x).tolist()}")


@app.command()
def run(
    config_path: Path | None = typer.Argument(None, help="Experiment YAML file"),
    scenario: str | None = SCENARIO_OPTION,
    assignments: list[str] | None = SET_OPTION,
    seed: int | None = typer.Option(None, "--seed", help="Run a single seed"),
    policy: list[str] | None = typer.Option(None, "--policy", "-p", help="Replace the policy list"),
    out_dir: Path | None = typer.Option(None, "--out-dir", "-o", help="Output directory"),
    threads: int | None = typer.Option(None, "--threads", "-j", help="Concurrent cells"),
    timing: bool = typer.Option(False, "--timing", help="Record wall_ms in summary.csv"),
    deterministic: bool = typer.Option(False, "--deterministic", help="Break rounding ties by lowest index"),
    max_candidates: int | None = typer.Option(None, "--max-candidates", help="Oracle size guard"),
    sa_t0: float | None = typer.Option(None, "--sa-t0"),
    sa_alpha: float | None = typer.Option(None, "--sa-alpha"),
    sa_q: int | None = typer.Option(None, "--sa-q"),
    sa_tmin: float | None = typer.Option(None, "--sa-tmin"),
    sa_p: float | None = typer.Option(None, "--sa-p"),
    step_size: float | None = typer.Option(None, "--step-size"),
    max_iters: int | None = typer.Option(None, "--max-iters"),
) -> None:
    """Run a seed x policy grid and write results, summary and plot CSVs."""
    with _exit_codes():
        extra = _solver_overrides(
            deterministic, sa_t0, sa_alpha, sa_q, sa_tmin, sa_p, step_size, max_iters
        )
        if seed is not None:
            extra["seeds"] = [seed]
        if policy:
            extra["policies"] = list(policy)
        config = _load(config_path, scenario, assignments, extra)
        paths = asyncio.run(
            run_experiment(
                config,
                out_dir=out_dir,
                threads=threads,
                record_timing=timing or None,
                max_candidates=max_candidates,
            )
        )

    for label, path in paths.items():
        console.print(f"[green][OK][/green] {label}: {path}")


@app.command()
def compare(
    results: Path = typer.Argument(..., help="results.csv (or the run directory)"),
    baseline: str = typer.Option(..., "--baseline", "-b", help="Baseline policy"),
    candidate: str = typer.Option(..., "--candidate", "-c", help="Candidate policy"),
    samples: int | None = typer.Option(None, "--samples", help="Bootstrap resamples"),
) -> None:
    """Paired per-cell deltas of candidate over baseline."""
    with _exit_codes():
        if not results.exists():
            _fail(f"results not found: {results}", EXIT_USAGE)
        outcome = compare_results(results, baseline, candidate, samples=samples)

    table = Table(title=f"{candidate} vs {baseline} ({outcome.cells} paired cells)")
    table.add_column("metric", style="cyan")
    for column in ("mean", "median", "95% CI low", "95% CI high"):
        table.add_column(column, justify="right")
    for row in outcome.table.itertuples(index=False):
        table.add_row(row.metric, f"{row.mean:.6g}", f"{row.median:.6g}", f"{row.ci_low:.6g}", f"{row.ci_high:.6g}")
    console.print(table)
    for label, fraction in outcome.demand_met.items():
        shown = "n/a" if np.isnan(fraction) else f"{fraction:.3f}"
        console.print(f"demand met ({label}): {shown}", highlight=False)


@app.command()
def defaults(
    scenario: str = typer.Option("enterprise-4ap", "--scenario", "-s", help="Built-in scenario"),
) -> None:
    """Print a built-in scenario as YAML, every default included."""
    with _exit_codes():
        text = preset(scenario).to_yaml()
    typer.echo(text, nl=False)


@app.command()
def policies() -> None:
    """List the registered policies."""
    table = Table()
    table.add_column("Policy", style="cyan")
    table.add_column("Modes")
    table.add_column("Airtime")
    table.add_column("Description", style="dim")
    for definition in default_registry().list_all():
        modes = ", ".join(mode.value for mode in definition.modes)
        table.add_row(definition.name, modes, definition.airtime_label, definition.description)
    console.print(table)


@app.command()
def version() -> None:
    """Show version information."""
    console.print(f"mmassoc v{__version__}")


def main() -> None:
    """Entry point."""
    app()


if __name__ == "__main__":
    main()
