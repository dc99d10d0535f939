import copy
import json

import numpy as np
import pytest

from src.config_validator import DEFAULT_CONFIG
from src.kmaps import bump_kmap, pointwise_kmap
from src.scalar_smooth import make_truncator
from src.spaces import Space


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def grid():
    return Space.grid(65)


@pytest.fixture
def small_grid():
    return Space.grid(8)


@pytest.fixture
def pvec():
    return Space.pvec(16, 4)


@pytest.fixture
def cheb():
    return Space.cheb(32, 1)


@pytest.fixture
def truncator():
    return make_truncator(1.0 / 3.0, 0.5)


@pytest.fixture
def pointwise(grid):
    return pointwise_kmap(1.0 / 3.0, 0.5, grid)


@pytest.fixture
def small_pointwise(small_grid):
    return pointwise_kmap(1.0 / 3.0, 0.5, small_grid)


@pytest.fixture
def bump(pvec):
    return bump_kmap(0.5, 1.0, pvec)


@pytest.fixture
def fast_config(tmp_path):
    """Config file with reduced probe counts for end-to-end runs"""
    config = copy.deepcopy(DEFAULT_CONFIG)
    config["verify"]["trials"] = 300
    config["verify"]["identity_trials"] = 200
    config["borel"]["directions"] = 5
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return str(path)
