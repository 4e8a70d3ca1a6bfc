"""Shared fixtures for the engine test suite."""

import os
from pathlib import Path

import pytest

from src.coefficients.pseries import compute_p_series
from src.utils.logging_factory import LoggingFactory

REPO_ROOT = Path(__file__).resolve().parent.parent

# Commands run from temporary directories must still find the config file
os.environ.setdefault("BP_ENGINE_CONFIG", str(REPO_ROOT / "src" / "config" / "config.yaml"))


@pytest.fixture
def pseries_3_16():
    """Hazewinkel p-series for p=3 through degree 16 (v1 and v2 stored)."""
    return compute_p_series(3, 16)


@pytest.fixture
def pseries_3_12():
    """Hazewinkel p-series for p=3 through degree 12 (v1 only)."""
    return compute_p_series(3, 12)


@pytest.fixture
def isolated_run(tmp_path, monkeypatch):
    """Run inside tmp_path with fresh logging and no inherited cache override."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("BP_ENGINE_CACHE_DIR", raising=False)
    LoggingFactory.reset()
    yield tmp_path
    LoggingFactory.reset()
