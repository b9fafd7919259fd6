"""Radio and obstacle configuration."""

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Eight tiers between the lowest and highest OFDM rates of the 60 GHz PHY.
DEFAULT_RATES_BPS: tuple[float, ...] = (
    693e6,
    1386e6,
    2079e6,
    2772e6,
    3465e6,
    4158e6,
    5197.5e6,
    6756e6,
)

THERMAL_NOISE_DBM_HZ = -174.0


class McsEntry(BaseModel):
    """One modulation/coding tier: usable from ``min_snr_db`` upwards."""

    model_config = ConfigDict(frozen=True)

    min_snr_db: float
    rate_bps: float = Field(gt=0)


def default_mcs_table(base_snr_db: float = 2.0, step_db: float = 3.0) -> list[McsEntry]:
    """Synthetic SNR thresholds, ``step_db`` apart from ``base_snr_db``.

    Not the standard's sensitivity table; override ``RadioConfig.mcs_table``
    to use measured values.
    """
    return [
        McsEntry(min_snr_db=base_snr_db + k * step_db, rate_bps=rate)
        for k, rate in enumerate(DEFAULT_RATES_BPS)
    ]


class RadioConfig(BaseModel):
    """Link-budget parameters shared by every AP and client."""

    model_config = ConfigDict(frozen=True)

    tx_power_dbm: float = 0.0
    antenna_gain_dbi: float = 15.0
    carrier_frequency_hz: float = Field(default=60.48e9, gt=0)
    bandwidth_hz: float = Field(default=2.16e9, gt=0)
    noise_figure_db: float = Field(default=10.0, ge=0)
    min_distance_m: float = Field(default=0.1, gt=0)
    mcs_table: list[McsEntry] = Field(default_factory=default_mcs_table, min_length=1)

    @model_validator(mode="after")
    def _table_strictly_increasing(self) -> "RadioConfig":
        for lower, upper in zip(self.mcs_table, self.mcs_table[1:], strict=False):
            if upper.min_snr_db <= lower.min_snr_db or upper.rate_bps <= lower.rate_bps:
                raise ValueError("mcs_table must be strictly increasing in min_snr_db and rate_bps")
        return self

    @property
    def noise_floor_dbm(self) -> float:
        """Thermal noise over the channel bandwidth plus receiver noise figure."""
        return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(self.bandwidth_hz) + self.noise_figure_db


class Wall(BaseModel):
    """A straight obstacle segment with a fixed penetration loss."""

    model_config = ConfigDict(frozen=True)

    start: tuple[float, float]
    end: tuple[float, float]
    attenuation_db: float = Field(default=10.0, ge=0)

    @model_validator(mode="after")
    def _distinct_endpoints(self) -> "Wall":
        if self.start == self.end:
            raise ValueError("wall endpoints must be distinct")
        return self
