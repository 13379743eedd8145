# cccp/core/config.py
# SPDX-License-Identifier: Apache-2.0
"""
Centralized, immutable configuration for the composite-pulse toolkit.

This module defines a frozen `Settings` dataclass whose fields are populated
from environment variables (loaded via python-dotenv if a `.env` file is
present). There is no module-level instance: the CLI calls
`Settings.from_env` once per run, inside its exit-code mapping, so a malformed
variable is reported like any other usage error. Nothing else reads the
environment.

Design goals
------------
- **Single source of truth**: tolerances, grid defaults and the worker count
  live here; the services receive them as keyword defaults or explicit
  arguments rather than reading the environment themselves.
- **Immutability**: `@dataclass(frozen=True)` prevents accidental mutation at
  runtime. Changes require re-instantiation (`Settings.from_env`).
- **Layering**: process environment (including a `.env` in the working
  directory, loaded at import) > optional config file (`--config`, dotenv
  syntax) > built-in defaults.

Testing
-------
Build a fresh instance instead of reloading the module:

    >>> s = Settings.from_env(environ={"CCCP_THREADS": "2"})
    >>> s.threads
    2
"""

from __future__ import annotations

import os
from collections.abc import Callable, Mapping
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Final, TypeVar

from dotenv import dotenv_values, load_dotenv

from . import constants as c
from .errors import ConfigError

# Pre-set env vars take precedence over `.env` (override=False).
load_dotenv()

ENV_PREFIX: Final[str] = "CCCP_"

#: Upper bound on the default worker count; grid chunks are small.
MAX_DEFAULT_THREADS: Final[int] = 8

_T = TypeVar("_T")


def _default_threads() -> int:
    return max(1, min(MAX_DEFAULT_THREADS, os.cpu_count() or 1))


@dataclass(frozen=True)
class Settings:
    """
    Immutable toolkit settings.

    Each attribute maps to the environment variable ``CCCP_<NAME>`` (upper
    case). Unset variables fall back to the documented defaults below.
    """

    # --- Tolerances ------------------------------------------------------------
    # Max-entry norm under which a first-order error operator counts as zero.
    robust_tol: float = c.ROBUST_TOL
    # 1 - |tr U|/2 under which a product counts as the identity up to phase.
    trivial_tol: float = c.TRIVIAL_TOL
    # Required zero-error fidelity floor for every library-built sequence.
    fidelity_tol: float = c.FIDELITY_TOL
    # Base step of the central differences (one Richardson level on top).
    derivative_step: float = c.DERIVATIVE_STEP

    # --- Fidelity landscape ------------------------------------------------------
    # Half-width of the symmetric (eps, f) window.
    fidmap_window: float = c.FIDMAP_WINDOW
    fidmap_resolution: int = c.FIDMAP_RESOLUTION

    # --- No-go scan ------------------------------------------------------------
    nogo_resolution: int = c.NOGO_RESOLUTION

    # --- Robustness-order fits -------------------------------------------------
    fit_low: float = c.FIT_LOW
    fit_high: float = c.FIT_HIGH
    fit_samples: int = c.FIT_SAMPLES

    # --- Runtime -----------------------------------------------------------------
    threads: int = 1
    log_level: str = "WARNING"
    log_format: str = "console"

    @classmethod
    def from_env(
        cls,
        config_path: str | Path | None = None,
        *,
        environ: Mapping[str, str] | None = None,
    ) -> Settings:
        """
        Build settings from the environment and an optional dotenv-style file.

        Args:
            config_path: Optional file in dotenv syntax (``CCCP_ROBUST_TOL=1e-7``).
                Keys there fill only what the environment leaves unset.
            environ: Mapping used instead of ``os.environ`` (tests).

        Raises:
            ConfigError: if the file is missing or a value does not parse.
        """
        env: dict[str, str] = {}
        if config_path is not None:
            path = Path(config_path)
            if not path.is_file():
                raise ConfigError(f"Config file not found: {path}")
            env.update({k: v for k, v in dotenv_values(path).items() if v is not None})
        env.update(os.environ if environ is None else environ)

        values: dict[str, Any] = {"threads": _default_threads()}
        for f in fields(cls):
            raw = env.get(ENV_PREFIX + f.name.upper())
            if raw is None or raw.strip() == "":
                continue
            caster: Callable[[str], Any] = {"float": float, "int": int}.get(
                str(f.type), str
            )
            values[f.name] = _parse(f.name, raw.strip(), caster)
        return _validated(cls(**values))


def _parse(name: str, raw: str, caster: Callable[[str], _T]) -> _T:
    try:
        return caster(raw)
    except ValueError as e:
        raise ConfigError(f"{ENV_PREFIX}{name.upper()}={raw!r}: {e}") from e


def _validated(s: Settings) -> Settings:
    """Reject settings the services cannot run with."""
    if s.threads < 1:
        raise ConfigError(f"threads must be >= 1, got {s.threads}")
    if s.fidmap_resolution < 2:
        raise ConfigError("fidmap_resolution must be >= 2")
    if s.nogo_resolution < 8:
        raise ConfigError("nogo_resolution must be >= 8")
    if not 0 < s.fit_low < s.fit_high:
        raise ConfigError("fit window must satisfy 0 < fit_low < fit_high")
    if s.log_format not in ("console", "json"):
        raise ConfigError(f"log_format must be console|json, got {s.log_format!r}")
    for name in ("robust_tol", "trivial_tol", "fidelity_tol", "derivative_step"):
        if getattr(s, name) <= 0:
            raise ConfigError(f"{name} must be > 0")
    return s

