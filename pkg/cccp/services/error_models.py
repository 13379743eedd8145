# cccp/services/error_models.py
# SPDX-License-Identifier: Apache-2.0
"""
Propagators under pulse-length error (PLE) and off-resonance error (ORE), and
extraction of the first-order error operators.

Error model
-----------
Every pulse of a sequence sees the same strengths (ε, f):

    R'(θ, φ) = exp[-i(1+ε)θ(n(φ)·σ + f σz)/2]

evaluated in closed form: effective axis (cos φ, sin φ, f)/√(1+f²) and
effective angle (1+ε)θ√(1+f²).

First-order operators
---------------------
E_ε = ∂U'/∂ε and E_f = ∂U'/∂f at (0, 0). Two independent routes:

- `first_order_errors`: central differences (base step h, then h/2) combined
  by one Richardson level. Shares the propagation code with everything else.
- `analytic_first_order_errors`: the exact sum over pulses of
  (later pulses)·D_i·(earlier pulses) with D_i = -iθ_i(n_i·σ)R_i/2 (PLE) and
  D_i = -i sin(θ_i/2)σz (ORE). Vectorised; the no-go scan runs on it.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import structlog
from numpy.typing import ArrayLike

from cccp.core.constants import DERIVATIVE_STEP, I2, ROBUST_TOL, SX, SY, SZ
from cccp.core.errors import InvalidParameterError

from .su2_core import (
    ComplexMatrix,
    PulseSequence,
    RotationParams,
    Unitary2,
    rotation,
    rotation_batch,
)

__all__ = [
    "ErrorAxis",
    "ErrorStrengths",
    "FirstOrderErrors",
    "analytic_first_order_errors",
    "first_order_errors",
    "first_order_model",
    "first_order_operators_batch",
    "is_robust",
    "max_norm",
    "pulse_with_errors",
    "pulse_with_errors_batch",
    "sequence_with_errors",
    "sequence_with_errors_batch",
]

log = structlog.get_logger(__name__)


class ErrorAxis(StrEnum):
    PLE = "ple"
    ORE = "ore"


@dataclass(frozen=True, slots=True)
class ErrorStrengths:
    """PLE strength ε and ORE strength f (dimensionless)."""

    epsilon: float = 0.0
    f: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.epsilon) and math.isfinite(self.f)):
            raise InvalidParameterError(
                f"Error strengths must be finite, got ({self.epsilon}, {self.f})"
            )


ZERO_ERROR = ErrorStrengths()


def max_norm(m: ArrayLike) -> float:
    """Max-entry magnitude, the norm used for every robustness decision."""
    return float(np.max(np.abs(np.asarray(m))))


@dataclass(frozen=True, eq=False)
class FirstOrderErrors:
    """∂U'/∂ε and ∂U'/∂f at zero error."""

    e_eps: ComplexMatrix
    e_f: ComplexMatrix

    def operator(self, axis: ErrorAxis) -> ComplexMatrix:
        return self.e_eps if axis is ErrorAxis.PLE else self.e_f

    def norm(self, axis: ErrorAxis) -> float:
        return max_norm(self.operator(axis))

    @property
    def eps_norm(self) -> float:
        return max_norm(self.e_eps)

    @property
    def f_norm(self) -> float:
        return max_norm(self.e_f)


# =============================================================================
# Propagation
# =============================================================================


def pulse_with_errors_batch(
    theta: ArrayLike, phi: ArrayLike, epsilon: ArrayLike, f: ArrayLike
) -> ComplexMatrix:
    """Closed-form R'(θ, φ) over broadcast arrays; shape (..., 2, 2)."""
    th, ph, eps, ff = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (theta, phi, epsilon, f))
    )
    r = np.sqrt(1.0 + ff * ff)
    half = 0.5 * (1.0 + eps) * th * r
    c = np.cos(half)
    s = np.sin(half)
    out = np.empty(th.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c - 1j * s * ff / r
    out[..., 0, 1] = -1j * s * np.exp(-1j * ph) / r
    out[..., 1, 0] = -1j * s * np.exp(1j * ph) / r
    out[..., 1, 1] = c + 1j * s * ff / r
    return out


def pulse_with_errors(p: RotationParams, e: ErrorStrengths) -> Unitary2:
    """One elementary pulse under both errors; exactly unitary."""
    return Unitary2(pulse_with_errors_batch(p.theta, p.phi, e.epsilon, e.f))


def sequence_with_errors(seq: PulseSequence, e: ErrorStrengths) -> Unitary2:
    """The whole sequence with the same (ε, f) injected into every pulse."""
    acc = I2
    for p in seq.pulses:
        acc = pulse_with_errors_batch(p.theta, p.phi, e.epsilon, e.f) @ acc
    return Unitary2(acc)


def sequence_with_errors_batch(
    seq: PulseSequence, epsilon: ArrayLike, f: ArrayLike
) -> ComplexMatrix:
    """`sequence_with_errors` over a broadcast grid of strengths."""
    eps, ff = np.broadcast_arrays(np.asarray(epsilon, float), np.asarray(f, float))
    acc: ComplexMatrix = np.broadcast_to(I2, eps.shape + (2, 2))
    for p in seq.pulses:
        acc = pulse_with_errors_batch(p.theta, p.phi, eps, ff) @ acc
    return acc


# =============================================================================
# First-order operators
# =============================================================================


def _richardson(
    values: Sequence[ComplexMatrix], p: int, r: float = 2.0
) -> ComplexMatrix:
    """
    Richardson extrapolation of approximations taken at steps h, h/r, h/r², ...

    The leading error term is assumed O(h^p); each level removes one order.
    """
    if len(values) < 2:
        raise ValueError("Richardson extrapolation needs at least two values")
    vals = [np.asarray(v, dtype=np.complex128) for v in values]
    for j in range(1, len(vals)):
        factor = r ** (p * j)
        for k in range(len(vals) - 1, j - 1, -1):
            vals[k] = (factor * vals[k] - vals[k - 1]) / (factor - 1.0)
    return vals[-1]


def _central_difference(g: Callable[[float], ComplexMatrix], h: float) -> ComplexMatrix:
    return (g(h) - g(-h)) / (2.0 * h)


def first_order_errors(
    seq: PulseSequence, *, step: float = DERIVATIVE_STEP
) -> FirstOrderErrors:
    """
    Numerical ∂U'/∂ε and ∂U'/∂f at (0, 0).

    Central differences at h and h/2 followed by one Richardson level, so the
    truncation error is O(h⁴).

    Args:
        seq: Sequence to differentiate.
        step: Base step h (> 0).
    """
    if not step > 0:
        raise InvalidParameterError(f"derivative step must be > 0, got {step}")

    def along_eps(h: float) -> ComplexMatrix:
        return sequence_with_errors(seq, ErrorStrengths(h, 0.0)).matrix

    def along_f(h: float) -> ComplexMatrix:
        return sequence_with_errors(seq, ErrorStrengths(0.0, h)).matrix

    ops = [
        _richardson(
            [_central_difference(g, step), _central_difference(g, step / 2.0)], p=2
        )
        for g in (along_eps, along_f)
    ]
    out = FirstOrderErrors(e_eps=ops[0], e_f=ops[1])
    log.debug(
        "first_order.extracted",
        label=seq.label,
        pulses=len(seq),
        eps_norm=out.eps_norm,
        f_norm=out.f_norm,
    )
    return out


def first_order_operators_batch(
    theta: ArrayLike, phi: ArrayLike
) -> tuple[ComplexMatrix, ComplexMatrix]:
    """
    Exact first-order operators for a batch of N-pulse sequences.

    Args:
        theta: Angles of shape (..., N); the last axis is the pulse index.
        phi: Azimuths broadcastable to `theta`.

    Returns:
        (E_ε, E_f), each of shape (..., 2, 2).
    """
    th, ph = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    n = th.shape[-1]
    batch = th.shape[:-1]
    rots = rotation_batch(th, ph)
    n_sigma = (
        np.cos(ph)[..., None, None] * SX + np.sin(ph)[..., None, None] * SY
    )
    d_eps = (-0.5j * th)[..., None, None] * (n_sigma @ rots)
    d_f = (-1j * np.sin(th / 2.0))[..., None, None] * SZ

    eye: ComplexMatrix = np.broadcast_to(I2, batch + (2, 2))
    before: list[ComplexMatrix] = []
    acc = eye
    for i in range(n):
        before.append(acc)
        acc = rots[..., i, :, :] @ acc
    after: list[ComplexMatrix] = [eye] * n
    acc = eye
    for i in range(n - 1, -1, -1):
        after[i] = acc
        acc = acc @ rots[..., i, :, :]

    e_eps = np.zeros(batch + (2, 2), dtype=np.complex128)
    e_f = np.zeros(batch + (2, 2), dtype=np.complex128)
    for i in range(n):
        e_eps += after[i] @ d_eps[..., i, :, :] @ before[i]
        e_f += after[i] @ d_f[..., i, :, :] @ before[i]
    return e_eps, e_f


def analytic_first_order_errors(seq: PulseSequence) -> FirstOrderErrors:
    """Exact first-order operators of `seq` (no finite differences)."""
    if not seq.pulses:
        zero = np.zeros((2, 2), dtype=np.complex128)
        return FirstOrderErrors(zero, zero.copy())
    e_eps, e_f = first_order_operators_batch(
        [p.theta for p in seq.pulses], [p.phi for p in seq.pulses]
    )
    return FirstOrderErrors(e_eps=e_eps, e_f=e_f)


def is_robust(
    seq: PulseSequence, axis: ErrorAxis, tol: float = ROBUST_TOL
) -> bool:
    """True iff the first-order operator for `axis` has max-norm <= tol."""
    return first_order_errors(seq).norm(axis) <= tol


def _as_matrix(delta: complex | ComplexMatrix) -> ComplexMatrix:
    arr = np.asarray(delta, dtype=np.complex128)
    return arr * I2 if arr.ndim == 0 else arr


def first_order_model(
    target: RotationParams,
    delta_eps: complex | ComplexMatrix,
    delta_f: complex | ComplexMatrix,
    e: ErrorStrengths,
) -> ComplexMatrix:
    """
    Combined first-order pulse form at strengths (ε, f):

        R(θ,φ) - iε δ_ε (n(φ)·σ) R(θ,φ)/2 - i f δ_f σz

    δ_ε = θ, δ_f = sin(θ/2) reproduces the elementary pulse to first order;
    (θ, 0) is the REP-PLE form and (0, sin(θ/2)) the REP-ORE form. Either
    coefficient may be a scalar or a 2×2 matrix.
    """
    r = rotation(target).matrix
    n_sigma = math.cos(target.phi) * SX + math.sin(target.phi) * SY
    return (
        r
        - 0.5j * e.epsilon * (_as_matrix(delta_eps) @ n_sigma @ r)
        - 1j * e.f * (_as_matrix(delta_f) @ SZ)
    )
