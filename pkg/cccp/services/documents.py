# cccp/services/documents.py
# SPDX-License-Identifier: Apache-2.0
"""
Serialized forms: sequence documents (JSON), CSV tables and angle tokens.

Sequence documents
------------------
    {
      "format": "cccp.sequence/1",
      "label": "CORPSE",
      "target": {"theta_rad": 3.141592653589793, "phi_rad": 0.0},
      "pulses": [{"theta_rad": ..., "phi_rad": ...}, ...],
      "provenance": {"builder": "corpse", "parameters": {...}}
    }

Floats are written with Python's shortest round-trip repr, so parsing a
document gives back the exact doubles. Keys are sorted and there is no
timestamp in the payload; identical sequences give byte-identical files.

Files are written atomically (temp file in the target directory, fsync,
`os.replace`).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import tempfile
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Final

import structlog

from cccp.core.errors import DocumentError

from .analysis import FidelityMap
from .su2_core import PulseSequence, RotationParams

__all__ = [
    "DOCUMENT_FORMAT",
    "SequenceDocument",
    "TimeCostRow",
    "fidelity_csv",
    "load_document",
    "parse_angle",
    "parse_range",
    "timecost_csv",
    "write_text_atomic",
]

log = structlog.get_logger(__name__)

DOCUMENT_FORMAT: Final[str] = "cccp.sequence/1"

# [sign][coefficient][*]pi[/denominator]
_PI_TOKEN = re.compile(
    r"^(?P<sign>[+-]?)(?P<coef>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi"
    r"(?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?$",
    re.IGNORECASE,
)


# =============================================================================
# Angle tokens
# =============================================================================


def parse_angle(token: str, *, degrees: bool = False) -> float:
    """
    Parse an angle in radians.

    Accepts plain numbers and the symbolic forms ``pi``, ``pi/2``, ``3pi/2``,
    ``-pi/4``, ``2*pi``. With `degrees`, plain numbers are read in degrees;
    symbolic tokens are always radians.

    Raises:
        DocumentError: the token is not an angle or is not finite.
    """
    text = token.strip()
    m = _PI_TOKEN.match(text)
    if m:
        coef = float(m.group("coef")) if m.group("coef") else 1.0
        den = float(m.group("den")) if m.group("den") else 1.0
        if den == 0.0:
            raise DocumentError(f"angle {token!r}: zero denominator")
        value = coef * math.pi / den
        return -value if m.group("sign") == "-" else value
    try:
        value = float(text)
    except ValueError:
        raise DocumentError(f"not an angle: {token!r}") from None
    if not math.isfinite(value):
        raise DocumentError(f"angle must be finite, got {token!r}")
    return math.radians(value) if degrees else value


def parse_range(text: str) -> tuple[float, float]:
    """Parse ``"a,b"`` into a pair of finite floats with a < b."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise DocumentError(f"range must be 'low,high', got {text!r}")
    try:
        low, high = float(parts[0]), float(parts[1])
    except ValueError:
        raise DocumentError(f"range must be numeric, got {text!r}") from None
    if not (math.isfinite(low) and math.isfinite(high)) or not low < high:
        raise DocumentError(f"range needs finite low < high, got {text!r}")
    return low, high


# =============================================================================
# Sequence documents
# =============================================================================


def _angle_pair(raw: Any, where: str) -> RotationParams:
    if not isinstance(raw, Mapping):
        raise DocumentError(f"{where}: expected an object, got {type(raw).__name__}")
    try:
        theta, phi = raw["theta_rad"], raw["phi_rad"]
    except KeyError as e:
        raise DocumentError(f"{where}: missing key {e.args[0]!r}") from None
    if any(isinstance(v, bool) or not isinstance(v, int | float) for v in (theta, phi)):
        raise DocumentError(f"{where}: angles must be numbers")
    if not (math.isfinite(theta) and math.isfinite(phi)):
        raise DocumentError(f"{where}: angles must be finite")
    return RotationParams(float(theta), float(phi))


@dataclass(frozen=True)
class SequenceDocument:
    """A pulse sequence plus provenance, as stored on disk."""

    label: str
    target: RotationParams
    pulses: tuple[RotationParams, ...]
    builder: str = ""
    parameters: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def from_sequence(cls, seq: PulseSequence) -> SequenceDocument:
        return cls(seq.label, seq.target, seq.pulses, seq.builder, dict(seq.parameters))

    def to_sequence(self) -> PulseSequence:
        return PulseSequence(
            self.pulses, self.target, self.label, self.builder, dict(self.parameters)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": DOCUMENT_FORMAT,
            "label": self.label,
            "target": {"theta_rad": self.target.theta, "phi_rad": self.target.phi},
            "pulses": [{"theta_rad": p.theta, "phi_rad": p.phi} for p in self.pulses],
            "provenance": {
                "builder": self.builder,
                "parameters": dict(self.parameters),
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, raw: Any) -> SequenceDocument:
        """
        Raises:
            DocumentError: wrong format tag, missing keys or non-numeric angles.
        """
        if not isinstance(raw, Mapping):
            raise DocumentError("sequence document must be a JSON object")
        if raw.get("format") != DOCUMENT_FORMAT:
            raise DocumentError(
                f"unsupported document format {raw.get('format')!r}; "
                f"expected {DOCUMENT_FORMAT!r}"
            )
        pulses_raw = raw.get("pulses")
        if not isinstance(pulses_raw, list):
            raise DocumentError("'pulses' must be a list")
        provenance = raw.get("provenance") or {}
        if not isinstance(provenance, Mapping):
            raise DocumentError("'provenance' must be an object")
        return cls(
            label=str(raw.get("label", "")),
            target=_angle_pair(raw.get("target"), "target"),
            pulses=tuple(
                _angle_pair(p, f"pulses[{i}]") for i, p in enumerate(pulses_raw)
            ),
            builder=str(provenance.get("builder", "")),
            parameters=dict(provenance.get("parameters") or {}),
        )

    @classmethod
    def loads(cls, text: str) -> SequenceDocument:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError(f"invalid JSON: {e}") from e
        return cls.from_dict(raw)


def load_document(path: str | Path) -> SequenceDocument:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot read {p}: {e.strerror or e}") from e
    return SequenceDocument.loads(text)


# =============================================================================
# Files
# =============================================================================


def write_text_atomic(path: str | Path, text: str) -> Path:
    """
    Atomically write `text` to `path`:
      - write to a temporary file in the same directory
      - fsync and os.replace for atomic swap
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", dir=str(target.parent), delete=False, newline=""
    ) as tmp:
        tmp.write(text)
        tmp.flush()
        os.fsync(tmp.fileno())
        temp_name = tmp.name
    os.replace(temp_name, target)
    log.debug("file.written", path=str(target), bytes=len(text.encode("utf-8")))
    return target


# =============================================================================
# CSV
# =============================================================================


def fidelity_csv(fmap: FidelityMap) -> str:
    """
    Header row ``eps\\f`` then the f samples; each body row starts with its ε
    sample followed by F values to 12 significant digits.
    """
    bio = io.StringIO()
    w = csv.writer(bio, lineterminator="\n")
    w.writerow(["eps\\f", *(repr(float(f)) for f in fmap.f_axis)])
    for eps, row in zip(fmap.eps_axis, fmap.values, strict=True):
        w.writerow([repr(float(eps)), *(f"{v:.12g}" for v in row)])
    return bio.getvalue()


@dataclass(frozen=True)
class TimeCostRow:
    name: str
    label: str
    pulses: int
    time_cost: float


def timecost_csv(rows: Iterable[TimeCostRow], theta: float) -> str:
    bio = io.StringIO()
    w = csv.writer(bio, lineterminator="\n")
    w.writerow(["pulse", "N", f"T(theta={theta!r})"])
    for r in rows:
        w.writerow([r.label, r.pulses, f"{r.time_cost:.12g}"])
    return bio.getvalue()
