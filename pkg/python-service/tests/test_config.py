from pathlib import Path

import numpy as np
import pytest

from app.config import get_settings
from app.errors import InvalidArgumentError, ResourceCapError
from app.logging import resolve_level
from app.state import CheckReport, MetricResult, jsonable
from storage.report_store import render_json


def test_defaults(tmp_path):
    settings = get_settings()
    assert settings.caps.ai_max_n == 14
    assert settings.caps.faa_max_n == 12
    assert settings.caps.nonlinearity_max_n == 20
    assert settings.verification.counterexample_limit == 100
    assert settings.verification.float_precision == 6
    assert settings.feature_flags.record_runs is False
    assert settings.log_level == "INFO"
    assert settings.data_dir == Path(tmp_path / "data")


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("AI_MAX_N", "10")
    monkeypatch.setenv("COUNTEREXAMPLE_LIMIT", "2")
    monkeypatch.setenv("RECORD_RUNS", "yes")
    monkeypatch.setenv("POLAR_LOG_LEVEL", "debug")
    monkeypatch.setenv("BACKGROUND_WORKERS", "0")
    get_settings.cache_clear()
    settings = get_settings()
    assert settings.caps.ai_max_n == 10
    assert settings.verification.counterexample_limit == 2
    assert settings.feature_flags.record_runs is True
    assert settings.log_level == "DEBUG"
    assert settings.background_workers == 1


def test_malformed_integer_falls_back(monkeypatch):
    monkeypatch.setenv("FAA_MAX_N", "lots")
    get_settings.cache_clear()
    assert get_settings().caps.faa_max_n == 12


def test_counterexample_limit(monkeypatch):
    monkeypatch.setenv("COUNTEREXAMPLE_LIMIT", "2")
    get_settings.cache_clear()
    report = CheckReport(target="demo", m=2)
    for i in range(5):
        report.record(i)
    assert not report.passed
    assert report.counterexamples == [0, 1]
    assert report.summary_line() == "demo m=2: FAIL counterexamples=2"


def test_report_only_checks_never_fail():
    report = CheckReport(target="demo", m=3, asserted=False)
    report.record("seen")
    assert report.passed
    assert report.summary_line() == "demo m=3: REPORT counterexamples=1"


def test_json_rendering_is_stable():
    data = {"b": np.int64(3), "a": (1, 2), "c": 1 / 3, "d": frozenset({2, 1}), "e": np.bool_(True)}
    assert jsonable(data) == {"b": 3, "a": [1, 2], "c": 1 / 3, "d": [1, 2], "e": True}
    text = render_json(data, precision=3)
    assert text.endswith("}\n")
    assert text.index('"a"') < text.index('"b"')
    assert '"c": 0.333' in text


def test_skipped_metric_serialisation():
    message = str(ResourceCapError("ai", 16, 14))
    result = MetricResult.skipped("ai", message)
    assert result.to_dict() == {"status": "skipped", "value": None, "message": "ai skipped: resource cap (n=16 exceeds 14)"}
    timed = MetricResult(name="weight", value=8, runtime_s=0.5)
    assert "runtime_s" not in timed.to_dict()
    assert timed.to_dict(with_timings=True)["runtime_s"] == 0.5


def test_log_level_names():
    assert resolve_level(None) == "INFO"
    assert resolve_level(" warn ") == "WARNING"
    assert resolve_level(10) == "DEBUG"
    with pytest.raises(InvalidArgumentError, match="unknown log level 'loud'"):
        resolve_level("loud")
