# cccp/core/errors.py
# SPDX-License-Identifier: Apache-2.0
"""
Exception hierarchy shared by the services and the CLI.

Every error carries an ``exit_code`` so the CLI can map failures without a
lookup table:

  1  usage / malformed input
  2  domain or formula error (an arccos/arcsinc argument out of range, ...)
  3  verification violation
"""

from __future__ import annotations

from typing import ClassVar


class PulseError(ValueError):
    """Base class for all toolkit errors."""

    exit_code: ClassVar[int] = 1


class InvalidParameterError(PulseError):
    """Non-finite or otherwise malformed numeric input."""


class DomainError(PulseError):
    """A closed-form formula was evaluated outside its domain."""

    exit_code: ClassVar[int] = 2

    def __init__(self, formula: str, detail: str) -> None:
        self.formula = formula
        super().__init__(f"{formula}: {detail}")


class DegenerateTargetError(DomainError):
    """The target rotation makes a formula divide by zero."""


class RecipeInvalidError(PulseError):
    """Inner pulse is not REP on the axis the outer pulse relies on."""

    exit_code: ClassVar[int] = 2

    def __init__(self, axis: str, detail: str) -> None:
        self.axis = axis
        super().__init__(f"REP mismatch on {axis}: {detail}")


class InvalidSequenceError(PulseError):
    """A sequence violates a precondition (e.g. a negative rotation angle)."""

    exit_code: ClassVar[int] = 2


class DegenerateFitError(PulseError):
    """Too few samples above the double-precision floor to fit a slope."""

    exit_code: ClassVar[int] = 2


class DocumentError(PulseError):
    """A sequence document or angle token could not be parsed."""


class ConfigError(PulseError):
    """Configuration value missing or malformed."""


class VerificationError(PulseError):
    """An acceptance check failed."""

    exit_code: ClassVar[int] = 3
