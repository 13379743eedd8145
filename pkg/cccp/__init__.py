# cccp/__init__.py
# SPDX-License-Identifier: Apache-2.0
"""Concatenated composite pulses robust against pulse-length and off-resonance errors."""

import structlog

from cccp.core.logs import configure_logging

__version__ = "0.1.0"

# Library use without the CLI: warnings and up, on stderr.
if not structlog.is_configured():
    configure_logging()
