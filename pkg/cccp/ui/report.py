# cccp/ui/report.py
# SPDX-License-Identifier: Apache-2.0
"""Human-facing rendering of sequences, tables and reports.

Everything here writes to a `rich` console and never to a data payload, so
timings and colours stay out of files. Functions are small and take plain
service-layer objects.

Currently provided:
  • sequence_table():   pulse list of a sequence with its time cost
  • timecost_table():   pulse / N / T rows
  • classification():   REP verdict, robust axes and first-order norms
  • fidmap_summary():   corner and centre values of a fidelity map
  • nogo_summary():     counts of the two-pulse scan
  • checks_table():     ✅/❌ lines of the acceptance suite
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence

from rich.console import Console
from rich.table import Table

from cccp.services.acceptance import CheckResult
from cccp.services.analysis import (
    FidelityMap,
    NoGoReport,
    RepClass,
    ResidualCoefficients,
    time_cost,
)
from cccp.services.documents import TimeCostRow
from cccp.services.su2_core import PulseSequence


def _deg(rad: float) -> str:
    return f"{math.degrees(rad):.4f}"


def _angle(rad: float) -> str:
    """Radians with the multiple of π alongside, e.g. ``3.1416 (1.0000π)``."""
    return f"{rad:.6f} ({rad / math.pi:.4f}π)"


def sequence_table(console: Console, seq: PulseSequence) -> None:
    name = seq.label or "sequence"
    # T is only defined for non-negative pulse angles.
    cost = (
        f"T={time_cost(seq):.4f}"
        if all(p.theta >= 0 for p in seq.pulses)
        else "T=n/a (negative angles)"
    )
    table = Table(title=f"{name}: N={len(seq)}, {cost}")
    table.add_column("#", justify="right")
    table.add_column("θ (rad)", justify="right")
    table.add_column("θ (deg)", justify="right")
    table.add_column("φ (rad)", justify="right")
    table.add_column("φ (deg)", justify="right")
    for i, p in enumerate(seq.pulses, start=1):
        table.add_row(
            str(i), _angle(p.theta), _deg(p.theta), _angle(p.phi), _deg(p.phi)
        )
    console.print(table)


def timecost_table(console: Console, rows: Iterable[TimeCostRow], theta: float) -> None:
    """Render pulse, N and T(θ); T is shown to one decimal like the usual tables."""
    rows_list = list(rows)
    table = Table(title=f"Operation time cost at θ = {_angle(theta)}")
    table.add_column("pulse")
    table.add_column("N", justify="right")
    table.add_column("T", justify="right")
    for r in rows_list:
        table.add_row(r.label, str(r.pulses), f"{r.time_cost:.1f}")
    console.print(table)


def classification(
    console: Console,
    seq: PulseSequence,
    verdict: RepClass,
    residuals: ResidualCoefficients,
) -> None:
    console.print(f"[bold]{seq.label or 'sequence'}[/bold] ({len(seq)} pulses)")
    console.print(verdict.describe())
    table = Table(show_header=True)
    table.add_column("error")
    table.add_column("‖E‖max", justify="right")
    table.add_column("coefficient", justify="right")
    table.add_column("pattern residual", justify="right")
    table.add_row(
        "PLE",
        f"{verdict.eps_norm:.3e}",
        f"{residuals.delta_eps.real:.6f}{residuals.delta_eps.imag:+.6f}j",
        f"{residuals.eps_residual:.3e}",
    )
    table.add_row(
        "ORE",
        f"{verdict.f_norm:.3e}",
        f"{residuals.delta_f.real:.6f}{residuals.delta_f.imag:+.6f}j",
        f"{residuals.f_residual:.3e}",
    )
    console.print(table)


def fidmap_summary(console: Console, fmap: FidelityMap) -> None:
    rows, cols = fmap.shape
    console.print(
        f"Fidelity map {rows}×{cols}: "
        f"ε ∈ [{fmap.eps_axis[0]:g}, {fmap.eps_axis[-1]:g}], "
        f"f ∈ [{fmap.f_axis[0]:g}, {fmap.f_axis[-1]:g}]"
    )
    console.print(
        f"  F(0,0) ≈ {fmap.value_at(0.0, 0.0):.12f}   "
        f"min F = {fmap.min_value():.12f}   "
        f"F ≥ 0.999 on {100.0 * fmap.plateau_fraction(0.999):.1f}% of the grid"
    )


def nogo_summary(console: Console, report: NoGoReport, seconds: float) -> None:
    status = "✅" if report.ok else "❌"
    console.print(
        f"{status} two-pulse scan at resolution {report.resolution}: "
        f"{report.pairs_checked} pairs, {report.ple_robust} PLE-robust, "
        f"{report.ore_robust} ORE-robust, {report.violations} violations "
        f"({seconds:.2f} s)"
    )
    for p1, p2 in report.examples:
        console.print(
            f"   robust but non-trivial: ({p1.theta:.6f}, {p1.phi:.6f}) "
            f"then ({p2.theta:.6f}, {p2.phi:.6f})"
        )


def checks_table(console: Console, results: Sequence[CheckResult]) -> None:
    for r in results:
        mark = "✅" if r.passed else "❌"
        console.print(f"{mark} {r.name}: {r.detail} ({r.seconds:.2f} s)")
    failed = sum(not r.passed for r in results)
    console.print(
        f"{len(results) - failed}/{len(results)} checks passed"
        + ("" if not failed else f", {failed} failed")
    )
