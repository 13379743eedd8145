# cccp/services/analysis.py
# SPDX-License-Identifier: Apache-2.0
"""
Analysis of pulse sequences.

This module provides:
  • REP classification (`classify_rep`) and the residual coefficients behind it
  • Operation time cost T = Σθ/π (`time_cost`, `time_cost_reduction`)
  • Fidelity landscapes over (ε, f) grids (`fidelity_map`)
  • Robustness-order fits of log(1-F) against log(strength) (`robustness_order`)
  • The exhaustive two-pulse no-go scan (`classify_pair`, `n2_no_go_scan`)

Grid evaluations are vectorised with numpy and split by row (or by θ1 for the
scan) across a thread pool. `Executor.map` keeps the input order, so results
do not depend on the worker count.
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import StrEnum
from typing import Final

import numpy as np
import structlog
from numpy.typing import NDArray

from cccp.core.constants import (
    DEGENERATE_ANGLE,
    FIDMAP_RESOLUTION,
    FIDMAP_WINDOW,
    FIT_HIGH,
    FIT_LOW,
    FIT_SAMPLES,
    INFIDELITY_FLOOR,
    NOGO_RESOLUTION,
    ROBUST_TOL,
    SX,
    SY,
    SZ,
    TRIVIAL_TOL,
    TWO_PI,
)
from cccp.core.errors import (
    DegenerateFitError,
    InvalidParameterError,
    InvalidSequenceError,
)

from .error_models import (
    ErrorAxis,
    FirstOrderErrors,
    first_order_errors,
    first_order_operators_batch,
    max_norm,
    sequence_with_errors_batch,
)
from .su2_core import (
    ComplexMatrix,
    PulseSequence,
    RotationParams,
    rotation,
    rotation_batch,
)

__all__ = [
    "FidelityMap",
    "FitAxis",
    "NoGoReport",
    "PairVerdict",
    "Rep",
    "RepClass",
    "ResidualCoefficients",
    "RobustnessFit",
    "classify_pair",
    "classify_rep",
    "fidelity_map",
    "n2_no_go_scan",
    "residual_coefficients",
    "robustness_order",
    "time_cost",
    "time_cost_reduction",
]

log = structlog.get_logger(__name__)

FloatArray = NDArray[np.float64]

#: Violating pairs kept in a no-go report.
MAX_VIOLATION_EXAMPLES: Final[int] = 10


# =============================================================================
# REP classification
# =============================================================================


class Rep(StrEnum):
    PLE = "ple"
    ORE = "ore"
    NONE = "none"


@dataclass(frozen=True)
class RepClass:
    """REP verdict plus the axes the sequence is robust against."""

    rep: Rep
    robust: tuple[ErrorAxis, ...]
    eps_norm: float
    f_norm: float

    def is_robust(self, axis: ErrorAxis) -> bool:
        return axis in self.robust

    def describe(self) -> str:
        """Short human form, e.g. ``REP: PLE; robust: ORE``."""
        rep = "none" if self.rep is Rep.NONE else self.rep.value.upper()
        robust = ", ".join(a.value.upper() for a in self.robust) or "none"
        return f"REP: {rep}; robust: {robust}"


@dataclass(frozen=True)
class ResidualCoefficients:
    """
    Projections of the phase-aligned first-order operators onto the
    elementary forms -i(n·σ)R/2 (PLE) and -iσz (ORE).

    For an elementary pulse delta_eps = θ and delta_f = sin(θ/2); the
    residual norms measure what the projections leave over.
    """

    delta_eps: complex
    delta_f: complex
    eps_residual: float
    f_residual: float


def _phase_aligned(
    seq: PulseSequence, errs: FirstOrderErrors
) -> tuple[ComplexMatrix, ComplexMatrix]:
    # Scale by the unit phase making tr(U0† R_target) real and positive.
    z = complex(np.vdot(seq.product().matrix, seq.target_unitary().matrix))
    c = z / abs(z) if abs(z) > 0.0 else 1.0 + 0.0j
    return c * errs.e_eps, c * errs.e_f


def _patterns(target: RotationParams) -> tuple[ComplexMatrix, ComplexMatrix]:
    r = rotation(target).matrix
    n_sigma = math.cos(target.phi) * SX + math.sin(target.phi) * SY
    return -0.5j * (n_sigma @ r), -1j * SZ


def _project(op: ComplexMatrix, basis: ComplexMatrix) -> tuple[complex, float]:
    coeff = complex(np.vdot(basis, op) / np.vdot(basis, basis).real)
    return coeff, max_norm(op - coeff * basis)


def residual_coefficients(
    seq: PulseSequence, errors: FirstOrderErrors | None = None
) -> ResidualCoefficients:
    errs = errors if errors is not None else first_order_errors(seq)
    e_eps, e_f = _phase_aligned(seq, errs)
    p_eps, p_f = _patterns(seq.target)
    d_eps, r_eps = _project(e_eps, p_eps)
    d_f, r_f = _project(e_f, p_f)
    return ResidualCoefficients(d_eps, d_f, r_eps, r_f)


def classify_rep(
    seq: PulseSequence,
    *,
    tol: float = ROBUST_TOL,
    errors: FirstOrderErrors | None = None,
) -> RepClass:
    """
    REP class of a sequence with respect to its target.

    REP_PLE: robust against ORE and the aligned E_ε equals -iθ(n·σ)R/2.
    REP_ORE: robust against PLE and the aligned E_f equals -i sin(θ/2)σz.
    Otherwise NONE. All comparisons use the max-entry norm against `tol`.
    """
    errs = errors if errors is not None else first_order_errors(seq)
    theta = seq.target.theta
    e_eps, e_f = _phase_aligned(seq, errs)
    p_eps, p_f = _patterns(seq.target)

    robust = tuple(a for a in ErrorAxis if errs.norm(a) <= tol)
    if ErrorAxis.ORE in robust and max_norm(e_eps - theta * p_eps) <= tol:
        rep = Rep.PLE
    elif (
        ErrorAxis.PLE in robust
        and max_norm(e_f - math.sin(theta / 2.0) * p_f) <= tol
    ):
        rep = Rep.ORE
    else:
        rep = Rep.NONE
    out = RepClass(rep, robust, errs.eps_norm, errs.f_norm)
    log.debug("rep.classified", label=seq.label, verdict=out.describe())
    return out


# =============================================================================
# Time cost
# =============================================================================


def time_cost(seq: PulseSequence) -> float:
    """
    Operation time cost T = Σθ_i/π over the raw angles.

    Raises:
        InvalidSequenceError: a pulse has a negative angle.
    """
    for i, p in enumerate(seq.pulses):
        if p.theta < 0.0:
            raise InvalidSequenceError(
                f"pulse {i} of {seq.label or 'sequence'} has negative angle {p.theta!r}"
            )
    return seq.total_angle / math.pi


def time_cost_reduction(full: PulseSequence, reduced: PulseSequence) -> float:
    """Fraction of the full sequence's time cost saved by the reduced one."""
    t_full = time_cost(full)
    if t_full == 0.0:
        raise InvalidSequenceError("full sequence has zero time cost")
    return 1.0 - time_cost(reduced) / t_full


# =============================================================================
# Fidelity landscapes
# =============================================================================


def _fidelity_rows(target: ComplexMatrix, batch: ComplexMatrix) -> FloatArray:
    # |tr(target† U)|/2 for every U in the batch.
    tr = np.einsum("ij,...ij->...", target.conj(), batch)
    return np.minimum(1.0, np.abs(tr) / 2.0)


@dataclass(frozen=True, eq=False)
class FidelityMap:
    """F(ε, f) on a grid; `values[i, j]` belongs to (eps_axis[i], f_axis[j])."""

    eps_axis: FloatArray
    f_axis: FloatArray
    values: FloatArray

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.eps_axis), len(self.f_axis)

    def value_at(self, epsilon: float, f: float) -> float:
        """Value at the grid sample nearest to (ε, f)."""
        i = int(np.argmin(np.abs(self.eps_axis - epsilon)))
        j = int(np.argmin(np.abs(self.f_axis - f)))
        return float(self.values[i, j])

    def min_value(self) -> float:
        return float(self.values.min())

    def plateau_fraction(self, threshold: float) -> float:
        """Share of grid cells with F >= threshold."""
        return float(np.mean(self.values >= threshold))


def fidelity_map(
    seq: PulseSequence,
    eps_range: tuple[float, float] = (-FIDMAP_WINDOW, FIDMAP_WINDOW),
    f_range: tuple[float, float] = (-FIDMAP_WINDOW, FIDMAP_WINDOW),
    resolution: int = FIDMAP_RESOLUTION,
    *,
    threads: int = 1,
) -> FidelityMap:
    """
    Fidelity between the target rotation and the erroneous sequence over a
    `resolution` × `resolution` grid (inclusive linspace on each axis).

    Rows (fixed ε) are evaluated independently and may run on `threads`
    workers; the output is identical for any worker count.
    """
    if resolution < 2:
        raise InvalidParameterError(f"resolution must be >= 2, got {resolution}")
    if threads < 1:
        raise InvalidParameterError(f"threads must be >= 1, got {threads}")
    eps_axis = np.linspace(eps_range[0], eps_range[1], resolution)
    f_axis = np.linspace(f_range[0], f_range[1], resolution)
    target = seq.target_unitary().matrix

    def row(eps: float) -> FloatArray:
        return _fidelity_rows(target, sequence_with_errors_batch(seq, eps, f_axis))

    with ThreadPoolExecutor(max_workers=threads) as pool:
        values = np.vstack(list(pool.map(row, eps_axis)))
    log.info(
        "fidmap.computed",
        label=seq.label,
        resolution=resolution,
        threads=threads,
        min_fidelity=float(values.min()),
    )
    return FidelityMap(eps_axis, f_axis, values)


# =============================================================================
# Robustness-order fits
# =============================================================================


class FitAxis(StrEnum):
    PLE = "ple"
    ORE = "ore"
    DIAGONAL = "diagonal"


@dataclass(frozen=True)
class RobustnessFit:
    """Least-squares line log10(1-F) = slope·log10(s) + intercept."""

    axis: FitAxis
    slope: float
    intercept: float
    r_squared: float
    samples: int


def robustness_order(
    seq: PulseSequence,
    axis: FitAxis | str,
    *,
    low: float = FIT_LOW,
    high: float = FIT_HIGH,
    samples: int = FIT_SAMPLES,
) -> RobustnessFit:
    """
    Fit the exponent of the infidelity along one error direction.

    Strengths are log-spaced in [low, high]; DIAGONAL sets ε = f. Samples with
    1 - F <= 1e-13 sit at the double-precision floor and are dropped.

    Raises:
        DegenerateFitError: fewer than three samples survive the floor.
    """
    fit_axis = FitAxis(axis)
    if not 0.0 < low < high:
        raise InvalidParameterError(
            f"fit window must satisfy 0 < low < high, got {low}, {high}"
        )
    strength = np.logspace(math.log10(low), math.log10(high), samples)
    zero = np.zeros_like(strength)
    eps = zero if fit_axis is FitAxis.ORE else strength
    f = zero if fit_axis is FitAxis.PLE else strength

    target = seq.target_unitary().matrix
    infidelity = 1.0 - _fidelity_rows(target, sequence_with_errors_batch(seq, eps, f))
    keep = infidelity > INFIDELITY_FLOOR
    if int(keep.sum()) < 3:
        raise DegenerateFitError(
            f"{seq.label or 'sequence'} on {fit_axis.value}: only {int(keep.sum())} "
            f"of {samples} samples above the 1e-13 infidelity floor"
        )
    x = np.log10(strength[keep])
    y = np.log10(infidelity[keep])
    slope, intercept = np.polyfit(x, y, 1)
    predicted = slope * x + intercept
    ss_res = float(np.sum((y - predicted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return RobustnessFit(
        fit_axis, float(slope), float(intercept), r_squared, int(keep.sum())
    )


# =============================================================================
# Two-pulse no-go scan
# =============================================================================


@dataclass(frozen=True)
class PairVerdict:
    ple_robust: bool
    ore_robust: bool
    trivial: bool

    @property
    def violation(self) -> bool:
        """Robust against some error yet not the identity."""
        return (self.ple_robust or self.ore_robust) and not self.trivial


def classify_pair(
    p1: RotationParams,
    p2: RotationParams,
    *,
    robust_tol: float = ROBUST_TOL,
    trivial_tol: float = TRIVIAL_TOL,
) -> PairVerdict:
    """Robustness and triviality of R(p2)·R(p1)."""
    theta = np.array([p1.theta, p2.theta])
    phi = np.array([p1.phi, p2.phi])
    e_eps, e_f = first_order_operators_batch(theta, phi)
    rots = rotation_batch(theta, phi)
    product = rots[1] @ rots[0]
    return PairVerdict(
        ple_robust=max_norm(e_eps) <= robust_tol,
        ore_robust=max_norm(e_f) <= robust_tol,
        trivial=abs(np.trace(product)) / 2.0 >= 1.0 - trivial_tol,
    )


@dataclass(frozen=True)
class NoGoReport:
    """Outcome of the exhaustive two-pulse scan."""

    resolution: int
    pairs_checked: int
    ple_robust: int
    ore_robust: int
    violations: int
    examples: tuple[tuple[RotationParams, RotationParams], ...]
    robust_tol: float
    trivial_tol: float

    @property
    def ok(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class _ChunkCounts:
    ple_robust: int
    ore_robust: int
    violations: int
    examples: tuple[tuple[RotationParams, RotationParams], ...]


def _scan_grids(resolution: int) -> tuple[FloatArray, FloatArray]:
    # θ in (0, 2π] skips the degenerate zero angle; spinors repeat only
    # after 4π, so 2π is a distinct sample. φ in [0, 2π).
    thetas = TWO_PI * np.arange(1, resolution + 1) / resolution
    thetas = thetas[thetas > DEGENERATE_ANGLE]
    phis = TWO_PI * np.arange(resolution) / resolution
    return thetas, phis


def _scan_chunk(
    theta1: float,
    thetas: FloatArray,
    phis: FloatArray,
    robust_tol: float,
    trivial_tol: float,
) -> _ChunkCounts:
    # Axes: (φ1, θ2, φ2), last axis the pulse index.
    ph1, th2, ph2 = np.meshgrid(phis, thetas, phis, indexing="ij")
    theta = np.stack([np.full_like(th2, theta1), th2], axis=-1)
    phi = np.stack([ph1, ph2], axis=-1)

    e_eps, e_f = first_order_operators_batch(theta, phi)
    ple = np.max(np.abs(e_eps), axis=(-2, -1)) <= robust_tol
    ore = np.max(np.abs(e_f), axis=(-2, -1)) <= robust_tol
    rots = rotation_batch(theta, phi)
    product = rots[..., 1, :, :] @ rots[..., 0, :, :]
    trivial = np.abs(np.trace(product, axis1=-2, axis2=-1)) / 2.0 >= 1.0 - trivial_tol
    bad = (ple | ore) & ~trivial

    examples = tuple(
        (
            RotationParams(theta1, float(phis[i])),
            RotationParams(float(thetas[j]), float(phis[m])),
        )
        for i, j, m in np.argwhere(bad)[:MAX_VIOLATION_EXAMPLES]
    )
    return _ChunkCounts(int(ple.sum()), int(ore.sum()), int(bad.sum()), examples)


def n2_no_go_scan(
    resolution: int = NOGO_RESOLUTION,
    *,
    robust_tol: float = ROBUST_TOL,
    trivial_tol: float = TRIVIAL_TOL,
    threads: int = 1,
) -> NoGoReport:
    """
    Check every pair on a resolution⁴ grid over (θ1, φ1, θ2, φ2): a pair whose
    first-order operator vanishes for either error must multiply to the
    identity up to phase. Violations are counted, not raised.
    """
    if resolution < 8:
        raise InvalidParameterError(f"no-go resolution must be >= 8, got {resolution}")
    if threads < 1:
        raise InvalidParameterError(f"threads must be >= 1, got {threads}")
    thetas, phis = _scan_grids(resolution)

    def chunk(theta1: float) -> _ChunkCounts:
        return _scan_chunk(theta1, thetas, phis, robust_tol, trivial_tol)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        chunks: Iterator[_ChunkCounts] = pool.map(chunk, thetas)
        results = list(chunks)

    examples = tuple(ex for c in results for ex in c.examples)[:MAX_VIOLATION_EXAMPLES]
    report = NoGoReport(
        resolution=resolution,
        pairs_checked=(len(thetas) * len(phis)) ** 2,
        ple_robust=sum(c.ple_robust for c in results),
        ore_robust=sum(c.ore_robust for c in results),
        violations=sum(c.violations for c in results),
        examples=examples,
        robust_tol=robust_tol,
        trivial_tol=trivial_tol,
    )
    log.info(
        "nogo.scanned",
        resolution=resolution,
        pairs=report.pairs_checked,
        ple_robust=report.ple_robust,
        ore_robust=report.ore_robust,
        violations=report.violations,
    )
    return report
