# cccp/core/logs.py
# SPDX-License-Identifier: Apache-2.0
"""Structured logging setup (structlog, stderr only)."""

from __future__ import annotations

import logging
import sys
from typing import Any

import structlog


def _stderr_logger(*_args: Any) -> structlog.PrintLogger:
    # Resolved per call so a swapped sys.stderr (pytest capture) is honoured.
    return structlog.PrintLogger(sys.stderr)


def configure_logging(level: str = "WARNING", fmt: str = "console") -> None:
    """
    Configure structlog once per process.

    Records go to **stderr** so stdout stays reserved for data payloads
    (documents, CSV, tables). Safe to call repeatedly; the last call wins.

    Args:
        level: Standard level name (DEBUG, INFO, WARNING, ...).
        fmt: ``console`` for human output, ``json`` for one JSON object per line.
    """
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        numeric = logging.WARNING

    renderer: structlog.types.Processor = (
        structlog.processors.JSONRenderer(sort_keys=True)
        if fmt == "json"
        else structlog.dev.ConsoleRenderer(
            colors=False, exception_formatter=structlog.dev.rich_traceback
        )
    )
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            structlog.processors.StackInfoRenderer(),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric),
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )
