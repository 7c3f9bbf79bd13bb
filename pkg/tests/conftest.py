"""
HeckMort - Shared test fixtures
"""

import logging

import numpy as np
import pytest

import config_manager
from config_manager import RunConfig
from series_core import SignedMonomial


@pytest.fixture
def q() -> SignedMonomial:
    return SignedMonomial.q(1)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def run_config(tmp_path) -> RunConfig:
    """Small-order run configuration with a private cache directory"""
    return RunConfig(order=12, jobs=1, cache_enabled=True, cache_dir=str(tmp_path / "cache"))


@pytest.fixture
def isolated_config(tmp_path, monkeypatch):
    """Fresh global ConfigManager whose cache lives under tmp_path"""
    monkeypatch.setenv("HECKMORT_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setattr(config_manager, "_config", None)
    yield config_manager.get_config()
    monkeypatch.setattr(config_manager, "_config", None)


@pytest.fixture(autouse=True)
def restore_root_logger():
    """Undo handlers installed by setup_logging inside a test"""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
