# tests/test_config.py
from __future__ import annotations

import importlib
import json
import math

import pytest
import structlog

import cccp
from cccp.core import config
from cccp.core import constants as c
from cccp.core.config import Settings
from cccp.core.errors import ConfigError, PulseError, VerificationError
from cccp.core.logs import configure_logging
from cccp.services.analysis import classify_rep
from cccp.services.error_models import first_order_errors
from cccp.services.pulse_library import bb1
from cccp.services.su2_core import RotationParams


def test_defaults_match_the_library_constants():
    s = Settings.from_env(environ={})
    assert s.robust_tol == c.ROBUST_TOL
    assert s.trivial_tol == c.TRIVIAL_TOL
    assert s.nogo_resolution == c.NOGO_RESOLUTION
    assert s.fidmap_window == c.FIDMAP_WINDOW
    assert s.threads >= 1
    assert s.log_format == "console"


def test_environment_values_are_cast():
    s = Settings.from_env(
        environ={
            "CCCP_ROBUST_TOL": "1e-7",
            "CCCP_THREADS": "3",
            "CCCP_LOG_LEVEL": "DEBUG",
            "CCCP_FIT_SAMPLES": " 12 ",
            "CCCP_FIDMAP_RESOLUTION": "",
        }
    )
    assert s.robust_tol == 1e-7
    assert s.threads == 3
    assert s.log_level == "DEBUG"
    assert s.fit_samples == 12
    assert s.fidmap_resolution == c.FIDMAP_RESOLUTION


def test_environment_beats_config_file(tmp_path):
    cfg = tmp_path / "cccp.env"
    cfg.write_text("CCCP_THREADS=2\nCCCP_NOGO_RESOLUTION=16\n", encoding="utf-8")
    s = Settings.from_env(cfg, environ={"CCCP_THREADS": "5"})
    assert s.threads == 5
    assert s.nogo_resolution == 16


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        Settings.from_env(tmp_path / "absent.env", environ={})


@pytest.mark.parametrize(
    "env",
    [
        {"CCCP_THREADS": "many"},
        {"CCCP_THREADS": "0"},
        {"CCCP_NOGO_RESOLUTION": "4"},
        {"CCCP_FIDMAP_RESOLUTION": "1"},
        {"CCCP_FIT_LOW": "0.5", "CCCP_FIT_HIGH": "0.1"},
        {"CCCP_LOG_FORMAT": "xml"},
        {"CCCP_ROBUST_TOL": "-1"},
    ],
)
def test_invalid_settings(env):
    with pytest.raises(ConfigError):
        Settings.from_env(environ=env)


def test_exit_codes():
    assert ConfigError("x").exit_code == 1
    assert VerificationError("x").exit_code == 3
    assert isinstance(ConfigError("x"), PulseError)
    assert isinstance(ConfigError("x"), ValueError)


def test_json_logging_goes_to_stderr(capsys):
    configure_logging("INFO", "json")
    structlog.get_logger("test").info("fidmap.computed", resolution=3)
    captured = capsys.readouterr()
    assert captured.out == ""
    record = json.loads(captured.err.strip().splitlines()[-1])
    assert record["event"] == "fidmap.computed"
    assert record["level"] == "info"
    assert record["resolution"] == 3


def test_level_filters_records(capsys):
    configure_logging("WARNING", "console")
    structlog.get_logger("test").info("hidden")
    structlog.get_logger("test").warning("shown")
    err = capsys.readouterr().err
    assert "hidden" not in err
    assert "shown" in err


def test_library_use_is_quiet_by_default(capsys):
    structlog.reset_defaults()
    importlib.reload(cccp)
    seq = bb1(RotationParams(math.pi / 2, 0.0))
    classify_rep(seq, errors=first_order_errors(seq))
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err == ""


def test_importing_config_ignores_malformed_environment(monkeypatch):
    monkeypatch.setenv("CCCP_THREADS", "abc")
    importlib.reload(config)
    with pytest.raises(ConfigError, match="CCCP_THREADS"):
        config.Settings.from_env()
