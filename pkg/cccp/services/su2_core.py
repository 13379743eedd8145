# cccp/services/su2_core.py
# SPDX-License-Identifier: Apache-2.0
"""
Exact 2×2 special-unitary algebra for single-qubit pulses.

This module provides:
  • `Unitary2`      : immutable 2×2 complex matrix (the propagator)
  • `RotationParams`: one elementary pulse (θ, φ) about n(φ) = (cos φ, sin φ, 0)
  • `PulseSequence` : ordered pulses (first applied first) plus their target
  • `rotation`, `compose`, `fidelity`, `is_trivial` and angle helpers

Conventions
-----------
- R(θ, φ) = exp[-iθ n(φ)·σ/2] = cos(θ/2) I - i sin(θ/2)(cos φ σx + sin φ σy),
  built in closed form (no matrix exponential).
- A sequence [p1, ..., pN] evaluates to R(pN)···R(p1): the first pulse is the
  rightmost factor.
- Global phase is stored as computed. Phase-insensitive comparisons go through
  `fidelity` / `is_trivial`.
- Angles are never reduced silently; CORPSE uses θ > 2π and the time cost
  depends on the raw angles. `normalize_angle` is the explicit reduction.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from cccp.core.constants import I2, SX, SY, SZ, TRIVIAL_TOL, TWO_PI
from cccp.core.errors import InvalidParameterError

__all__ = [
    "IDENTITY",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "PulseSequence",
    "RotationParams",
    "Unitary2",
    "angles_equal",
    "compose",
    "fidelity",
    "is_trivial",
    "normalize_angle",
    "rotation",
    "rotation_batch",
]

ComplexMatrix = NDArray[np.complex128]


# =============================================================================
# Unitary2
# =============================================================================


@dataclass(frozen=True, eq=False)
class Unitary2:
    """Immutable 2×2 complex matrix; the stored array is read-only."""

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        arr = np.array(self.matrix, dtype=np.complex128, copy=True)
        if arr.shape != (2, 2):
            raise InvalidParameterError(f"Unitary2 needs a 2x2 matrix, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidParameterError("Unitary2 entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "matrix", arr)

    @classmethod
    def from_entries(cls, a: complex, b: complex, c: complex, d: complex) -> Unitary2:
        """Build from row-major entries [[a, b], [c, d]]."""
        return cls(np.array([[a, b], [c, d]], dtype=np.complex128))

    @property
    def entries(self) -> tuple[complex, complex, complex, complex]:
        m = self.matrix
        return complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1])

    def dagger(self) -> Unitary2:
        return Unitary2(self.matrix.conj().T)

    def __matmul__(self, other: Unitary2) -> Unitary2:
        return Unitary2(self.matrix @ other.matrix)

    def __mul__(self, scalar: complex) -> Unitary2:
        return Unitary2(self.matrix * scalar)

    __rmul__ = __mul__

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def det(self) -> complex:
        a, b, c, d = self.entries
        return a * d - b * c

    def unitarity_error(self) -> float:
        """Max-entry deviation of U†U from the identity."""
        return float(np.max(np.abs(self.matrix.conj().T @ self.matrix - I2)))

    def allclose(self, other: Unitary2, atol: float = 1e-12) -> bool:
        """Entrywise comparison (phase-sensitive)."""
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        a, b, c, d = self.entries
        return f"Unitary2([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"


IDENTITY = Unitary2(I2)
SIGMA_X = Unitary2(SX)
SIGMA_Y = Unitary2(SY)
SIGMA_Z = Unitary2(SZ)


# =============================================================================
# Pulses and sequences
# =============================================================================


def normalize_angle(phi: float) -> float:
    """Reduce an azimuthal angle to [0, 2π)."""
    out = math.fmod(phi, TWO_PI)
    if out < 0.0:
        out += TWO_PI
    # fmod of a value just below 0 can land exactly on 2π after the shift.
    return 0.0 if out >= TWO_PI else out


def angles_equal(a: float, b: float, tol: float) -> bool:
    """True when a ≡ b (mod 2π) within `tol`."""
    d = normalize_angle(a - b)
    return min(d, TWO_PI - d) <= tol


@dataclass(frozen=True, slots=True)
class RotationParams:
    """Rotation angle θ and azimuthal axis angle φ, both in radians."""

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise InvalidParameterError(
                "Rotation angles must be finite, "
                f"got theta={self.theta}, phi={self.phi}"
            )

    def normalized(self) -> RotationParams:
        """Same pulse with φ reduced to [0, 2π); θ is kept raw."""
        return RotationParams(self.theta, normalize_angle(self.phi))

    @property
    def axis(self) -> tuple[float, float, float]:
        return math.cos(self.phi), math.sin(self.phi), 0.0


@dataclass(frozen=True)
class PulseSequence:
    """
    Ordered elementary pulses (index 0 applied first) and the gate they target.

    `builder` and `parameters` record provenance for serialized documents.
    """

    pulses: tuple[RotationParams, ...]
    target: RotationParams
    label: str = ""
    builder: str = ""
    parameters: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pulses", tuple(self.pulses))

    def __len__(self) -> int:
        return len(self.pulses)

    def __iter__(self) -> Iterator[RotationParams]:
        return iter(self.pulses)

    @property
    def angles(self) -> tuple[float, ...]:
        return tuple(p.theta for p in self.pulses)

    @property
    def total_angle(self) -> float:
        return math.fsum(self.angles)

    def product(self) -> Unitary2:
        """Zero-error propagator R(pN)···R(p1)."""
        return compose(rotation(p) for p in self.pulses)

    def target_unitary(self) -> Unitary2:
        return rotation(self.target)

    def with_pulses(
        self, pulses: Iterable[RotationParams], *, label: str | None = None
    ) -> PulseSequence:
        """Copy with a new pulse list; target and provenance carried over."""
        return PulseSequence(
            tuple(pulses),
            self.target,
            self.label if label is None else label,
            self.builder,
            dict(self.parameters),
        )


# =============================================================================
# Operations
# =============================================================================


def rotation(p: RotationParams) -> Unitary2:
    """R(θ, φ) in closed form; unitary by construction."""
    if not (math.isfinite(p.theta) and math.isfinite(p.phi)):
        raise InvalidParameterError(f"non-finite rotation {p}")
    c = math.cos(p.theta / 2.0)
    s = math.sin(p.theta / 2.0)
    return Unitary2.from_entries(
        c,
        -1j * s * complex(math.cos(p.phi), -math.sin(p.phi)),
        -1j * s * complex(math.cos(p.phi), math.sin(p.phi)),
        c,
    )


def rotation_batch(theta: ArrayLike, phi: ArrayLike) -> ComplexMatrix:
    """
    Vectorised R(θ, φ) over broadcast arrays.

    Returns:
        Array of shape ``broadcast(theta, phi).shape + (2, 2)``.
    """
    th, ph = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    c = np.cos(th / 2.0)
    s = np.sin(th / 2.0)
    out = np.empty(th.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c
    out[..., 0, 1] = -1j * s * np.exp(-1j * ph)
    out[..., 1, 0] = -1j * s * np.exp(1j * ph)
    out[..., 1, 1] = c
    return out


def compose(unitaries: Iterable[Unitary2]) -> Unitary2:
    """Product of unitaries given first-to-last; the empty product is I."""
    acc = I2
    for u in unitaries:
        acc = u.matrix @ acc
    return Unitary2(acc)


def fidelity(u: Unitary2, v: Unitary2) -> float:
    """Gate fidelity |tr(u†v)|/2, insensitive to the global phase of either."""
    value = abs(np.vdot(u.matrix, v.matrix)) / 2.0
    return min(1.0, float(value))


def is_trivial(u: Unitary2, tol: float = TRIVIAL_TOL) -> bool:
    """True iff u is the identity up to global phase: |tr u|/2 >= 1 - tol."""
    return abs(u.trace()) / 2.0 >= 1.0 - tol
