"""Experiment configuration: YAML files, dotted overrides and named presets."""

from collections.abc import Callable, Mapping
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from mmassoc.core.errors import ConfigError, PolicyError
from mmassoc.core.types import FrameConfig
from mmassoc.loadsolve.annealing import SAParams
from mmassoc.phy.radio import RadioConfig, Wall
from mmassoc.policies.base import TrafficMode
from mmassoc.policies.registry import default_registry
from mmassoc.satsolve.relaxed import RelaxedSolverParams
from mmassoc.scenario.mobility import MobilityParams
from mmassoc.scenario.topology import MIN_COMPONENT_MASS, ClientDensity, GaussianComponent


class SeedRange(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start: int = 0
    count: int = Field(default=30, gt=0)


class PartitionConfig(BaseModel):
    """Office partitions spanning the whole area, each with a centred door."""

    model_config = ConfigDict(extra="forbid")

    x_splits: list[float] = Field(default_factory=list)
    y_splits: list[float] = Field(default_factory=list)
    attenuation_db: float = Field(default=10.0, ge=0)
    door_width: float = Field(default=1.0, ge=0)


class ScenarioConfig(BaseModel):
    """Deployment geometry and client placement."""

    model_config = ConfigDict(extra="forbid")

    area: tuple[float, float] = (24.0, 20.0)
    ap_grid: tuple[int, int] = (2, 2)
    clients: int = Field(default=10, gt=0)
    placement: Literal["pmf", "uniform"] = "pmf"
    density: ClientDensity = Field(
        default_factory=lambda: ClientDensity(components=[GaussianComponent(center=(15.0, 13.0))])
    )
    walls: list[Wall] = Field(default_factory=list)
    partitions: PartitionConfig | None = None
    mobility: MobilityParams | None = None

    @model_validator(mode="after")
    def _geometry(self) -> "ScenarioConfig":
        if self.area[0] <= 0 or self.area[1] <= 0:
            raise ValueError("area must be positive")
        if self.ap_grid[0] < 1 or self.ap_grid[1] < 1:
            raise ValueError("ap_grid needs at least one row and one column")
        if self.mobility is not None:
            (x0, x1), (y0, y1) = self.mobility.box
            if x0 < 0 or y0 < 0 or x1 > self.area[0] or y1 > self.area[1]:
                raise ValueError("mobility box must lie inside the area")
        if self.placement == "pmf":
            for component in self.density.components:
                if component.mass_bound(self.area) < MIN_COMPONENT_MASS:
                    raise ValueError(
                        f"density component centred at {component.center} has negligible mass inside the area"
                    )
        return self


class DemandConfig(BaseModel):
    """Offered load per client, uniform in [low_bps, high_bps]."""

    model_config = ConfigDict(extra="forbid")

    low_bps: float = Field(default=0.5e9, gt=0)
    high_bps: float = Field(default=1.25e9, gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "DemandConfig":
        if self.low_bps > self.high_bps:
            raise ValueError("low_bps must not exceed high_bps")
        return self


class ExperimentConfig(BaseModel):
    """One experiment: scenario x seeds x policies under a traffic mode."""

    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    mode: TrafficMode = TrafficMode.SATURATION
    seeds: list[int] | SeedRange = Field(default_factory=SeedRange)
    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig)
    demand: DemandConfig | None = None
    policies: list[str] = Field(default_factory=lambda: ["snr-ea", "proposed-sat"], min_length=1)
    radio: RadioConfig = Field(default_factory=RadioConfig)
    frames: FrameConfig = Field(default_factory=FrameConfig)
    relaxed: RelaxedSolverParams = Field(default_factory=RelaxedSolverParams)
    annealing: SAParams = Field(default_factory=SAParams)
    deterministic: bool = False

    @model_validator(mode="after")
    def _consistent(self) -> "ExperimentConfig":
        if self.mode is TrafficMode.FINITE and self.demand is None:
            raise ValueError("finite mode needs a demand section")
        if self.mode is TrafficMode.SATURATION and self.demand is not None:
            raise ValueError("saturation mode takes no demand section")
        if len(set(self.policies)) != len(self.policies):
            raise ValueError("policies must be unique")
        if isinstance(self.seeds, list) and not self.seeds:
            raise ValueError("seeds must not be empty")
        registry = default_registry()
        for name in self.policies:
            try:
                policy = registry.get(name)
            except PolicyError as exc:
                raise ValueError(str(exc)) from None
            if not policy.supports(self.mode):
                raise ValueError(f"policy '{name}' does not support {self.mode.value} traffic")
        return self

    def seed_list(self) -> list[int]:
        if isinstance(self.seeds, SeedRange):
            return list(range(self.seeds.start, self.seeds.start + self.seeds.count))
        return list(self.seeds)

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(mode="json"), sort_keys=False)


def _line_of(root: yaml.Node | None, loc: tuple[int | str, ...]) -> int | None:
    """1-based line of the deepest YAML node matching a validation error location."""
    if root is None:
        return None
    node = root
    line = node.start_mark.line + 1
    for key in loc:
        if isinstance(node, yaml.MappingNode):
            match = next((v for k, v in node.value if k.value == str(key)), None)
            if match is None:
                break
            node = match
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
        else:
            break
        line = node.start_mark.line + 1
    return line


def _first_error(exc: ValidationError) -> tuple[tuple[int | str, ...], str]:
    error = exc.errors()[0]
    loc = tuple(error["loc"])
    field = ".".join(str(part) for part in loc) or "config"
    return loc, f"{field}: {error['msg']}"


def load_config(path: Path) -> ExperimentConfig:
    """Parse and validate a YAML experiment file.

    Errors are raised as ConfigError anchored at ``path:line``.
    """
    source = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", source) from exc
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"invalid YAML: {getattr(exc, 'problem', exc)}", source, line) from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("top level must be a mapping", source, 1)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        loc, message = _first_error(exc)
        raise ConfigError(message, source, _line_of(root, loc)) from exc


def apply_overrides(config: ExperimentConfig, overrides: Mapping[str, Any]) -> ExperimentConfig:
    """New config with dotted keys (``annealing.t0``) replaced; unknown keys are errors."""
    if not overrides:
        return config
    data = config.model_dump(mode="json")
    for dotted, value in overrides.items():
        parts = dotted.split(".")
        node: Any = data
        for depth, part in enumerate(parts[:-1]):
            if not isinstance(node, dict) or part not in node:
                raise ConfigError(f"unknown key '{'.'.join(parts[: depth + 1])}'", "overrides")
            if node[part] is None:
                node[part] = {}
            node = node[part]
        if not isinstance(node, dict) or (parts[-1] not in node and node):
            raise ConfigError(f"unknown key '{dotted}'", "overrides")
        node[parts[-1]] = value
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        _, message = _first_error(exc)
        raise ConfigError(message, "overrides") from exc


def parse_assignments(items: list[str]) -> dict[str, Any]:
    """``key=value`` strings to an override mapping; values are read as YAML scalars."""
    overrides: dict[str, Any] = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"expected key=value, got '{item}'", "overrides")
        overrides[key.strip()] = yaml.safe_load(raw)
    return overrides


def _derive(base: ExperimentConfig, **update: Any) -> ExperimentConfig:
    return ExperimentConfig.model_validate({**base.model_dump(), **update})


def _enterprise_4ap() -> ExperimentConfig:
    return ExperimentConfig(
        name="enterprise-4ap",
        scenario=ScenarioConfig(
            area=(24.0, 20.0),
            ap_grid=(2, 2),
            clients=10,
            density=ClientDensity(components=[GaussianComponent(center=(15.0, 13.0))]),
        ),
        policies=["snr-ea", "greedy-ea", "minmax-ea", "proposed-sat", "oracle"],
    )


def _enterprise_9ap() -> ExperimentConfig:
    return ExperimentConfig(
        name="enterprise-9ap",
        scenario=ScenarioConfig(
            area=(30.0, 30.0),
            ap_grid=(3, 3),
            clients=30,
            density=ClientDensity(components=[GaussianComponent(center=(15.0, 15.0))]),
        ),
        policies=["snr-ea", "greedy-ea", "minmax-ea", "proposed-sat"],
    )


def _finite_4ap() -> ExperimentConfig:
    return _derive(
        _enterprise_4ap(),
        name="finite-4ap",
        mode=TrafficMode.FINITE,
        demand=DemandConfig(low_bps=0.46e9, high_bps=2.3e9),
        policies=["snr-ea", "snr-wf", "minmax-ea", "proposed-sawf", "oracle"],
    )


def _mobile_4ap() -> ExperimentConfig:
    base = _enterprise_4ap()
    return _derive(
        base,
        name="mobile-4ap",
        seeds=SeedRange(count=10),
        scenario={**base.scenario.model_dump(), "mobility": MobilityParams()},
        policies=["snr-ea", "greedy-ea", "minmax-ea", "proposed-sat"],
    )


def _finite_9ap() -> ExperimentConfig:
    return _derive(
        _enterprise_9ap(),
        name="finite-9ap",
        mode=TrafficMode.FINITE,
        demand=DemandConfig(low_bps=0.5e9, high_bps=1.25e9),
        policies=["snr-ea", "snr-wf", "minmax-ea", "proposed-sawf"],
    )


def _mobile_finite_4ap() -> ExperimentConfig:
    return _derive(
        _mobile_4ap(),
        name="mobile-finite-4ap",
        mode=TrafficMode.FINITE,
        demand=DemandConfig(low_bps=0.46e9, high_bps=2.3e9),
        policies=["snr-ea", "snr-wf", "minmax-ea", "proposed-sawf"],
    )


def _obstacles_9ap() -> ExperimentConfig:
    base = _enterprise_9ap()
    partitions = PartitionConfig(x_splits=[10.0, 20.0], y_splits=[10.0, 20.0])
    return _derive(
        base,
        name="obstacles-9ap",
        mode=TrafficMode.FINITE,
        scenario={**base.scenario.model_dump(), "partitions": partitions},
        demand=DemandConfig(low_bps=0.5e9, high_bps=1.25e9),
        policies=["snr-ea", "snr-wf", "minmax-ea", "proposed-sawf"],
    )


PRESETS: dict[str, Callable[[], ExperimentConfig]] = {
    "enterprise-4ap": _enterprise_4ap,
    "enterprise-9ap": _enterprise_9ap,
    "finite-4ap": _finite_4ap,
    "finite-9ap": _finite_9ap,
    "mobile-4ap": _mobile_4ap,
    "mobile-finite-4ap": _mobile_finite_4ap,
    "obstacles-9ap": _obstacles_9ap,
}


def preset(name: str) -> ExperimentConfig:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"unknown scenario '{name}' (available: {', '.join(sorted(PRESETS))})") from None
