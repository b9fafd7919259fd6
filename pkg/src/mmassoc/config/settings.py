"""Configuration settings with Pydantic."""

from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class OracleSettings(BaseSettings):
    """Exhaustive-search oracle configuration."""

    model_config = SettingsConfigDict(env_prefix="MMASSOC_ORACLE_")

    max_candidates: int = Field(default=10_000_000, gt=0)
    chunk_size: int = Field(default=16_384, gt=0)


class RunnerSettings(BaseSettings):
    """Experiment runner configuration."""

    model_config = SettingsConfigDict(env_prefix="MMASSOC_RUNNER_")

    threads: int = Field(default=1, ge=1)
    out_dir: Path = Path("results")
    bootstrap_samples: int = Field(default=2000, ge=100)
    # wall_ms is written as 0 unless enabled
    record_timing: bool = False


class Settings(BaseSettings):
    """Main application settings."""

    model_config = SettingsConfigDict(
        env_prefix="MMASSOC_",
        env_nested_delimiter="__",
    )

    debug: bool = False
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"
    log_format: Literal["json", "console"] = "console"

    oracle: OracleSettings = Field(default_factory=OracleSettings)
    runner: RunnerSettings = Field(default_factory=RunnerSettings)

    def ensure_directories(self) -> None:
        """Create the output directory."""
        self.runner.out_dir.mkdir(parents=True, exist_ok=True)


settings = Settings()
