import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))

from app.config import get_settings  # noqa: E402
from app.logging import configure_logging  # noqa: E402
from core.field import make_field  # noqa: E402

_ENV_KEYS = (
    "POLAR_LOG_LEVEL",
    "AI_MAX_N",
    "FAA_MAX_N",
    "NONLINEARITY_MAX_N",
    "MAX_MONOMIALS",
    "COUNTEREXAMPLE_LIMIT",
    "FLOAT_PRECISION",
    "LAMBDA_SEED",
    "RECORD_RUNS",
    "BACKGROUND_WORKERS",
)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    for key in _ENV_KEYS:
        monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("POLAR_DATA_DIR", str(tmp_path / "data"))
    get_settings.cache_clear()
    configure_logging.cache_clear()
    yield
    get_settings.cache_clear()
    configure_logging.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def gf16():
    return make_field(4)


@pytest.fixture
def gf64():
    return make_field(6)
