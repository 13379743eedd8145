# cccp/services/acceptance.py
# SPDX-License-Identifier: Apache-2.0
"""
Acceptance checks run by ``cccp verify``.

Each check returns a `CheckResult`; none of them raises on a failed
expectation. Formula errors inside a check are reported as failures unless
the check documents the case as outside a builder's domain (SCROFULOUS is
defined for 0 < θ <= π only, so CinS is not built at θ = 3π/2).
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from typing import Final

import numpy as np
import structlog

from cccp.core.config import Settings
from cccp.core.constants import UNITARITY_TOL
from cccp.core.errors import DomainError, PulseError

from . import catalog
from .analysis import (
    FitAxis,
    Rep,
    classify_rep,
    n2_no_go_scan,
    robustness_order,
    time_cost,
)
from .concatenator import (
    REDUCED_NAMES,
    CccpRecipe,
    concatenate,
    merge_same_axis,
    modified_short_corpse,
    reduced_via_concatenation,
    skip_trivial_pairs,
)
from .error_models import (
    ErrorAxis,
    ErrorStrengths,
    first_order_errors,
    sequence_with_errors,
)
from .pulse_library import corpse_k, sk1
from .su2_core import RotationParams, fidelity

log = structlog.get_logger(__name__)

#: Pulse count and time cost at θ = π/2 and θ = π, one decimal.
TIME_COST_TABLE: Final[dict[str, tuple[int, float, float]]] = {
    "elementary": (1, 0.5, 1.0),
    "scrofulous": (3, 2.3, 3.0),
    "sk1": (3, 4.5, 5.0),
    "bb1": (4, 4.5, 5.0),
    "short-corpse": (3, 2.0, 2.3),
    "corpse": (3, 4.0, 4.3),
    "cins": (9, 12.5, 13.0),
    "cinsk": (9, 16.0, 16.3),
    "cinbb": (12, 18.7, 19.0),
    "skinsc": (9, 14.0, 14.3),
    "bbinsc": (12, 14.0, 14.3),
    "reduced-cinsk": (5, 8.0, 8.3),
    "reduced-cinbb": (6, 8.0, 8.3),
    "reduced-skinsc": (6, 6.0, 6.3),
}
TIME_COST_SLACK: Final[float] = 0.05

#: REP class and robust axes of the single-error composite pulses.
REP_TABLE: Final[dict[str, tuple[Rep, tuple[ErrorAxis, ...]]]] = {
    "sk1": (Rep.ORE, (ErrorAxis.PLE,)),
    "bb1": (Rep.ORE, (ErrorAxis.PLE,)),
    "scrofulous": (Rep.NONE, (ErrorAxis.PLE,)),
    "corpse": (Rep.PLE, (ErrorAxis.ORE,)),
    "short-corpse": (Rep.NONE, (ErrorAxis.ORE,)),
}

CANCELLATION_THETAS: Final[tuple[float, ...]] = (
    math.pi / 6.0,
    math.pi / 2.0,
    math.pi,
    3.0 * math.pi / 2.0,
)
#: Pulses whose builder chain runs through SCROFULOUS (0 < θ <= π).
SCROFULOUS_BASED: Final[frozenset[str]] = frozenset({"scrofulous", "cins"})

QUADRATIC_SLOPE: Final[tuple[float, float]] = (1.9, 2.1)
ROBUST_SLOPE_MIN: Final[float] = 3.5

#: Robust axis of each single-error composite pulse.
SINGLE_ERROR_ROBUST: Final[dict[str, FitAxis]] = {
    "scrofulous": FitAxis.PLE,
    "sk1": FitAxis.PLE,
    "bb1": FitAxis.PLE,
    "corpse": FitAxis.ORE,
    "short-corpse": FitAxis.ORE,
}

SEED: Final[int] = 20240613


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _target(theta: float, phi: float = 0.0) -> RotationParams:
    return RotationParams(theta, phi)


# =============================================================================
# Checks
# =============================================================================


def check_time_cost_table() -> tuple[bool, str]:
    bad: list[str] = []
    for name, (n, t_half, t_pi) in TIME_COST_TABLE.items():
        seq_half = catalog.build(name, _target(math.pi / 2.0))
        seq_pi = catalog.build(name, _target(math.pi))
        got = (len(seq_pi), time_cost(seq_half), time_cost(seq_pi))
        if (
            len(seq_half) != n
            or got[0] != n
            or abs(got[1] - t_half) > TIME_COST_SLACK
            or abs(got[2] - t_pi) > TIME_COST_SLACK
        ):
            bad.append(f"{name}: got N={got[0]} T={got[1]:.3f}/{got[2]:.3f}")
    return not bad, "; ".join(bad) or f"{len(TIME_COST_TABLE)} rows match"


def check_rep_table(tol: float) -> tuple[bool, str]:
    bad: list[str] = []
    for name, (rep, robust) in REP_TABLE.items():
        for theta in (math.pi / 2.0, math.pi):
            got = classify_rep(catalog.build(name, _target(theta)), tol=tol)
            if got.rep is not rep or got.robust != robust:
                bad.append(f"{name}@{theta:.4f}: {got.describe()}")
    return not bad, "; ".join(bad) or f"{len(REP_TABLE)} pulses x 2 targets match"


def check_first_order_cancellation(tol: float) -> tuple[bool, str]:
    bad: list[str] = []
    checked = skipped = 0
    for name in catalog.DOUBLY_ROBUST_NAMES:
        for theta in CANCELLATION_THETAS:
            for phi in (0.0, math.pi / 4.0):
                try:
                    seq = catalog.build(name, _target(theta, phi))
                except DomainError:
                    if name in SCROFULOUS_BASED and theta > math.pi:
                        skipped += 1
                        continue
                    raise
                errs = first_order_errors(seq)
                checked += 1
                if errs.eps_norm > tol or errs.f_norm > tol:
                    bad.append(
                        f"{name}@({theta:.4f},{phi:.4f}): "
                        f"|E_eps|={errs.eps_norm:.2e} |E_f|={errs.f_norm:.2e}"
                    )
    detail = f"{checked} builds cancel both errors ({skipped} outside domain)"
    return not bad, "; ".join(bad) or detail


def _slope_ok(slope: float, robust: bool) -> bool:
    if robust:
        return slope >= ROBUST_SLOPE_MIN
    low, high = QUADRATIC_SLOPE
    return low <= slope <= high


def check_robustness_fits(settings: Settings) -> tuple[bool, str]:
    target = _target(math.pi)
    cases: list[tuple[str, FitAxis, bool]] = [
        ("elementary", FitAxis.PLE, False),
        ("elementary", FitAxis.ORE, False),
    ]
    for name, axis in SINGLE_ERROR_ROBUST.items():
        other = FitAxis.ORE if axis is FitAxis.PLE else FitAxis.PLE
        cases += [(name, axis, True), (name, other, False)]
    for name in catalog.DOUBLY_ROBUST_NAMES:
        cases += [(name, a, True) for a in FitAxis]

    bad: list[str] = []
    for name, axis, robust in cases:
        fit = robustness_order(
            catalog.build(name, target),
            axis,
            low=settings.fit_low,
            high=settings.fit_high,
            samples=settings.fit_samples,
        )
        if not _slope_ok(fit.slope, robust):
            bad.append(f"{name}/{axis.value}: slope {fit.slope:.2f}")
    return not bad, "; ".join(bad) or f"{len(cases)} fits in range"


def _random_thetas(n: int = 20) -> Iterator[float]:
    rng = np.random.default_rng(SEED)
    for v in rng.uniform(0.0, 2.0 * math.pi, n):
        if v > 0.0:
            yield float(v)


def check_cinsk_time_cost() -> tuple[bool, str]:
    bad: list[str] = []
    for theta in _random_thetas():
        extra = (theta - 4.0 * corpse_k(theta)) / math.pi
        full = time_cost(catalog.build("cinsk", _target(theta)))
        reduced = time_cost(catalog.build("reduced-cinsk", _target(theta)))
        if abs(full - 16.0 - extra) > 1e-12 or abs(reduced - 8.0 - extra) > 1e-12:
            bad.append(f"theta={theta:.6f}: T={full:.15f}, reduced T={reduced:.15f}")
    return not bad, "; ".join(bad) or "closed forms hold at 20 random angles"


def check_no_go(settings: Settings, resolution: int) -> tuple[bool, str]:
    report = n2_no_go_scan(
        resolution,
        robust_tol=settings.robust_tol,
        trivial_tol=settings.trivial_tol,
        threads=settings.threads,
    )
    detail = (
        f"{report.pairs_checked} pairs, {report.ple_robust} PLE-robust, "
        f"{report.ore_robust} ORE-robust, {report.violations} violations"
    )
    return report.ok, detail


def check_dual_path() -> tuple[bool, str]:
    bad: list[str] = []
    thetas = (math.pi / 6.0, math.pi / 2.0, math.pi, 3.0 * math.pi / 2.0)
    for label in REDUCED_NAMES:
        name = label.lower().replace(" ", "-")
        for theta in thetas:
            for phi in (0.0, math.pi / 4.0):
                direct = catalog.build(name, _target(theta, phi))
                via = reduced_via_concatenation(label, _target(theta, phi))
                if len(direct) != len(via) or any(
                    abs(a.theta - b.theta) > 1e-12 or abs(a.phi - b.phi) > 1e-12
                    for a, b in zip(direct, via, strict=True)
                ):
                    bad.append(f"{label}@({theta:.4f},{phi:.4f})")

    rng = np.random.default_rng(SEED)
    recipe = CccpRecipe(
        "reduced SKinsC", modified_short_corpse, sk1, skip_trivial_pairs
    )
    unmerged = concatenate(recipe, _target(math.pi))
    merged = merge_same_axis(unmerged)
    for eps, f in rng.uniform(-0.3, 0.3, size=(10, 2)):
        e = ErrorStrengths(float(eps), float(f))
        a = sequence_with_errors(unmerged, e)
        b = sequence_with_errors(merged, e)
        if not a.allclose(b, atol=1e-12):
            bad.append(f"merge changed the propagator at ({eps:.3f},{f:.3f})")
    detail = (
        f"{len(REDUCED_NAMES)} reduced CCCPs agree; merge "
        f"{len(unmerged)}->{len(merged)} pulses preserves 10 error points"
    )
    return not bad, "; ".join(bad) or detail


def check_correctness_floor(settings: Settings) -> tuple[bool, str]:
    bad: list[str] = []
    worst_drift = 0.0
    builds = 0
    for name in catalog.NAMES:
        for theta in (math.pi / 2.0, math.pi):
            for phi in (0.0, math.pi / 4.0):
                seq = catalog.build(name, _target(theta, phi))
                product = seq.product()
                builds += 1
                worst_drift = max(worst_drift, product.unitarity_error())
                floor = 1.0 - settings.fidelity_tol
                if fidelity(seq.target_unitary(), product) < floor:
                    bad.append(f"{name}@({theta:.4f},{phi:.4f})")
    if worst_drift > UNITARITY_TOL:
        bad.append(f"unitarity drift {worst_drift:.2e}")
    detail = f"{builds} builds at fidelity 1; unitarity drift {worst_drift:.1e}"
    return not bad, "; ".join(bad) or detail


# =============================================================================
# Runner
# =============================================================================


def run_acceptance(
    settings: Settings, *, nogo_resolution: int | None = None
) -> list[CheckResult]:
    """Run every check in order; formula errors become failed checks."""
    resolution = settings.nogo_resolution if nogo_resolution is None else nogo_resolution
    checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
        ("time cost table", check_time_cost_table),
        ("REP classification", lambda: check_rep_table(settings.robust_tol)),
        (
            "first-order cancellation",
            lambda: check_first_order_cancellation(settings.robust_tol),
        ),
        ("robustness-order fits", lambda: check_robustness_fits(settings)),
        ("CinSK time-cost formula", check_cinsk_time_cost),
        (
            f"two-pulse no-go scan ({resolution})",
            lambda: check_no_go(settings, resolution),
        ),
        ("reduced CCCP dual path", check_dual_path),
        ("correctness floor", lambda: check_correctness_floor(settings)),
    ]
    results: list[CheckResult] = []
    for name, fn in checks:
        start = time.perf_counter()
        try:
            passed, detail = fn()
        except PulseError as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        elapsed = time.perf_counter() - start
        results.append(CheckResult(name, passed, detail, elapsed))
        log.info("verify.check", check=name, passed=passed, seconds=round(elapsed, 3))
    return results
