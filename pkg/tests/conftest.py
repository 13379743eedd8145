# tests/conftest.py
from __future__ import annotations

import math
import os
from collections.abc import Iterator

import numpy as np
import pytest

from cccp.core.logs import configure_logging
from cccp.services.su2_core import RotationParams


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def pi_target() -> RotationParams:
    return RotationParams(math.pi, 0.0)


@pytest.fixture
def half_pi_target() -> RotationParams:
    return RotationParams(math.pi / 2, 0.0)


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep developer CCCP_* variables out of the tests."""
    for key in list(os.environ):
        if key.startswith("CCCP_"):
            monkeypatch.delenv(key, raising=False)


@pytest.fixture(autouse=True)
def _reset_logging() -> Iterator[None]:
    """Put the package logging defaults back after tests that reconfigure it."""
    yield
    configure_logging()
