import pytest

from core.config import SimulationConfig
from core.construction import build_csd


@pytest.fixture(scope='module')
def c422():
    return build_csd('c422')


@pytest.fixture(scope='module')
def c513():
    return build_csd('c513')


@pytest.fixture
def config():
    config = SimulationConfig("Test Config")
    config.update(seed=11, distance_trials=200)
    return config
