import numpy as np
import pytest

import voigtkit as vk


@pytest.fixture(scope="session")
def high():
    return vk.Preset.HIGH.params


@pytest.fixture(scope="session")
def fast():
    return vk.Preset.FAST.params


@pytest.fixture(scope="session")
def upper_points():
    """Seeded strictly-upper-half-plane sample shared across tests."""
    rng = np.random.default_rng(1234)
    return rng.uniform(-10, 10, 400) + 1j * rng.uniform(1e-3, 50, 400)


def ulps_apart(a: complex, b: complex) -> float:
    """Distance |a - b| in units of the spacing at the values' magnitude."""
    scale = max(abs(a), abs(b), np.finfo(np.float64).tiny)
    return float(abs(a - b) / np.spacing(scale))
