import pytest

from clustertrop.config import Config
from clustertrop.seeds import FanSeedSpec, Seed, seed_from_fan_spec
from clustertrop.trop import normalize_fan

CUBIC = (2, 2, 2)
A2 = (1, 1, 0)
A3 = (1, 1, 1)


@pytest.fixture
def config():
    return Config({})


@pytest.fixture
def cubic_spec():
    return FanSeedSpec.triangle(*CUBIC)


@pytest.fixture
def cubic_seed(cubic_spec):
    return seed_from_fan_spec(cubic_spec)


@pytest.fixture
def cubic_model(cubic_spec):
    return normalize_fan(cubic_spec)


@pytest.fixture
def a2_seed():
    return seed_from_fan_spec(FanSeedSpec.triangle(*A2))


@pytest.fixture
def a2_model():
    return normalize_fan(FanSeedSpec.triangle(*A2))


@pytest.fixture
def three_cycle_seed():
    return Seed(skew=[[0, 1, -1], [-1, 0, 1], [1, -1, 0]], d=[1, 1, 1])
