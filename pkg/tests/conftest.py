"""Shared fixtures."""

import numpy as np
import pytest

from mmassoc.core.types import FrameConfig


@pytest.fixture
def frames() -> FrameConfig:
    """100 ms beacon interval with 10 ms overhead (h = 0.9)."""
    return FrameConfig(superframe_s=0.1, overhead_s=0.01)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def symmetric_rates() -> np.ndarray:
    """Two clients, two APs, every link at 1 Gb/s."""
    return np.full((2, 2), 1e9)


@pytest.fixture
def random_rates(rng: np.random.Generator) -> np.ndarray:
    """Ten clients over four APs with rates inside the default MCS span."""
    return rng.uniform(0.693e9, 6.756e9, size=(10, 4))
