import sys
from pathlib import Path

import numpy as np
import pytest

# Make core importable when pytest is run from elsewhere
sys.path.insert(0, str(Path(__file__).parent))

from core.model import ModelParams, Variant


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def rashba():
    return ModelParams(Variant.RASHBA, 1.0, 1.0, 0.0)


@pytest.fixture
def dresselhaus():
    return ModelParams(Variant.DRESSELHAUS, 0.5, 1.0, 1.0)


@pytest.fixture
def free_params():
    return ModelParams(Variant.RASHBA, 0.5, 0.0, 0.0)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Environment overrides must not leak in from the developer's shell or .env"""
    monkeypatch.delenv("SPINGREEN_THREADS", raising=False)
    monkeypatch.delenv("SPINGREEN_LOG_LEVEL", raising=False)
