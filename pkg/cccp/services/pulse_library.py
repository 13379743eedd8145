# cccp/services/pulse_library.py
# SPDX-License-Identifier: Apache-2.0
"""
Builders for the named composite pulses and the trivial pulse sequences.

Every builder takes the target rotation (θ, φ) and returns a `PulseSequence`
whose first pulse is applied first. Offsets are added to the target φ and
angles are kept raw (CORPSE uses θ > 2π).

Domains
-------
- BB1, SK1:     |θ| <= 4π (arccos[-θ/(4π)]).
- SCROFULOUS:   0 < θ <= π in practice; the arcsinc argument 2cos(θ/2)/π must
                lie in [0, 1] and both arccos arguments in [-1, 1]. Outside
                that a `DomainError` naming the formula is raised; there is
                no analytic extension.
- CORPSE:       any θ whose windings keep all three angles non-negative.

Formulas that leave their domain raise `DomainError`; nothing is clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Final

import structlog

from cccp.core.constants import ARCSINC_TOL, TWO_PI
from cccp.core.errors import DegenerateTargetError, DomainError

from .su2_core import PulseSequence, RotationParams

__all__ = [
    "CORPSE_WINDINGS",
    "SHORT_CORPSE_WINDINGS",
    "CorpseWindings",
    "arcsinc",
    "bb1",
    "bb1_phase",
    "corpse",
    "corpse_k",
    "elementary",
    "full_rotation",
    "scrofulous",
    "short_corpse",
    "sk1",
    "trivial_pair",
    "trivial_triple",
]

log = structlog.get_logger(__name__)

IDENTITY_TARGET_THETA: Final[float] = 0.0


@dataclass(frozen=True, slots=True)
class CorpseWindings:
    """Integers n1, n2, n3 adding whole 2π turns to the three CORPSE pulses."""

    n1: int = 1
    n2: int = 1
    n3: int = 0


CORPSE_WINDINGS: Final = CorpseWindings(1, 1, 0)
SHORT_CORPSE_WINDINGS: Final = CorpseWindings(0, 1, 0)


# =============================================================================
# Checked special functions
# =============================================================================


def _arccos(x: float, formula: str) -> float:
    if not -1.0 <= x <= 1.0:
        raise DomainError(formula, f"arccos argument {x:.17g} outside [-1, 1]")
    return math.acos(x)


def _sinc(x: float) -> float:
    return 1.0 if x == 0.0 else math.sin(x) / x


def arcsinc(y: float) -> float:
    """
    Inverse of sinc(x) = sin(x)/x on the decreasing branch [0, π].

    Bisection, converged until the bracket is narrower than 1e-12. sinc(π) = 0,
    so y → 0⁺ maps to x → π.

    Raises:
        DomainError: if y is outside [0, 1] (no solution on the branch).
    """
    if not math.isfinite(y) or not 0.0 <= y <= 1.0:
        raise DomainError("arcsinc", f"argument {y!r} outside [0, 1]")
    if y == 1.0:
        return 0.0
    if y == 0.0:
        return math.pi
    lo, hi = 0.0, math.pi
    while hi - lo > ARCSINC_TOL:
        mid = 0.5 * (lo + hi)
        if _sinc(mid) > y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def corpse_k(theta: float) -> float:
    """Auxiliary CORPSE angle k = arcsin[sin(θ/2)/2]."""
    return math.asin(math.sin(theta / 2.0) / 2.0)


def bb1_phase(theta: float) -> float:
    """Offset arccos[-θ/(4π)] shared by BB1 and SK1."""
    return _arccos(-theta / (2.0 * TWO_PI), "arccos[-theta/(4pi)]")


def _sequence(
    pulses: list[tuple[float, float]],
    target: RotationParams,
    label: str,
    builder: str,
    **parameters: float | int,
) -> PulseSequence:
    return PulseSequence(
        tuple(RotationParams(t, p) for t, p in pulses),
        target,
        label=label,
        builder=builder,
        parameters={"theta": target.theta, "phi": target.phi, **parameters},
    )


# =============================================================================
# Composite pulses
# =============================================================================


def elementary(target: RotationParams) -> PulseSequence:
    """The target pulse itself (N = 1)."""
    return _sequence([(target.theta, target.phi)], target, "elementary", "elementary")


def bb1(target: RotationParams) -> PulseSequence:
    """
    BB1: π(φ1) 2π(φ2) π(φ1) θ(φ) with φ1 = φ + arccos[-θ/(4π)], φ2 = 3φ1 - 2φ.

    Robust against PLE; REP with respect to ORE.
    """
    theta, phi = target.theta, target.phi
    phi1 = phi + bb1_phase(theta)
    phi2 = 3.0 * phi1 - 2.0 * phi
    return _sequence(
        [(math.pi, phi1), (TWO_PI, phi2), (math.pi, phi1), (theta, phi)],
        target,
        "BB1",
        "bb1",
    )


def scrofulous(target: RotationParams) -> PulseSequence:
    """
    SCROFULOUS: θ1(φ+φ1) π(φ+φ2) θ1(φ+φ1).

        θ1 = arcsinc[2cos(θ/2)/π]
        φ1 = arccos[-π cos θ1 / (2 θ1 sin(θ/2))]
        φ2 = φ1 - arccos[-π/(2θ1)]

    Robust against PLE, not REP.

    Raises:
        DegenerateTargetError: θ with sin(θ/2) = 0.
        DomainError: arcsinc or arccos argument out of range.
    """
    theta, phi = target.theta, target.phi
    half_sin = math.sin(theta / 2.0)
    if half_sin == 0.0 or theta == 0.0:
        raise DegenerateTargetError(
            "scrofulous", f"sin(theta/2) = 0 at theta={theta!r}"
        )
    theta1 = arcsinc(2.0 * math.cos(theta / 2.0) / math.pi)
    off1 = _arccos(
        -math.pi * math.cos(theta1) / (2.0 * theta1 * half_sin),
        "arccos[-pi cos(theta1)/(2 theta1 sin(theta/2))]",
    )
    off2 = off1 - _arccos(-math.pi / (2.0 * theta1), "arccos[-pi/(2 theta1)]")
    return _sequence(
        [(theta1, phi + off1), (math.pi, phi + off2), (theta1, phi + off1)],
        target,
        "SCROFULOUS",
        "scrofulous",
    )


def sk1(target: RotationParams) -> PulseSequence:
    """
    SK1: θ(φ) 2π(φ - s) 2π(φ + s) with s = arccos[-θ/(4π)].

    Robust against PLE; REP with respect to ORE.
    """
    theta, phi = target.theta, target.phi
    s = bb1_phase(theta)
    return _sequence(
        [(theta, phi), (TWO_PI, phi - s), (TWO_PI, phi + s)], target, "SK1", "sk1"
    )


def corpse(
    target: RotationParams, windings: CorpseWindings = CORPSE_WINDINGS
) -> PulseSequence:
    """
    CORPSE family: θ1(φ) θ2(φ+π) θ3(φ) with k = arcsin[sin(θ/2)/2] and

        θ1 = 2n1π + θ/2 - k,  θ2 = 2n2π - 2k,  θ3 = 2n3π + θ/2 - k.

    (1, 1, 0) is CORPSE (robust against ORE, REP with respect to PLE);
    (0, 1, 0) is the short CORPSE (robust against ORE, not REP).

    Raises:
        DomainError: the windings produce a negative angle.
    """
    theta, phi = target.theta, target.phi
    k = corpse_k(theta)
    angles = (
        windings.n1 * TWO_PI + theta / 2.0 - k,
        windings.n2 * TWO_PI - 2.0 * k,
        windings.n3 * TWO_PI + theta / 2.0 - k,
    )
    if min(angles) < 0.0:
        raise DomainError(
            "corpse windings",
            f"{windings} give negative angles {angles} for theta={theta!r}",
        )
    short = windings == SHORT_CORPSE_WINDINGS
    return _sequence(
        [(angles[0], phi), (angles[1], phi + math.pi), (angles[2], phi)],
        target,
        "short CORPSE" if short else "CORPSE",
        "short-corpse" if short else "corpse",
        n1=windings.n1,
        n2=windings.n2,
        n3=windings.n3,
    )


def short_corpse(target: RotationParams) -> PulseSequence:
    return corpse(target, SHORT_CORPSE_WINDINGS)


# =============================================================================
# Trivial pulse sequences (identity targets)
# =============================================================================


def trivial_pair(theta: float, phi: float) -> PulseSequence:
    """R(θ, φ)·R(θ, φ+π): R(θ, φ+π) first. Identity; robust against PLE."""
    return _sequence(
        [(theta, phi + math.pi), (theta, phi)],
        RotationParams(IDENTITY_TARGET_THETA, phi),
        "trivial pair",
        "trivial-pair",
        pair_theta=theta,
    )


def full_rotation(phi: float) -> PulseSequence:
    """R(2π, φ) = -I. Robust against ORE."""
    return _sequence(
        [(TWO_PI, phi)],
        RotationParams(IDENTITY_TARGET_THETA, phi),
        "full rotation",
        "full-rotation",
    )


def trivial_triple(phi_prime: float, phi: float) -> PulseSequence:
    """R(π, φ')·R(2π, φ)·R(π, φ') = I. Robust against ORE."""
    return _sequence(
        [(math.pi, phi_prime), (TWO_PI, phi), (math.pi, phi_prime)],
        RotationParams(IDENTITY_TARGET_THETA, phi),
        "trivial triple",
        "trivial-triple",
        phi_prime=phi_prime,
    )
