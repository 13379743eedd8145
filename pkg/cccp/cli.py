# cccp/cli.py
# SPDX-License-Identifier: Apache-2.0
#
# Purpose
# -------
# Command-line surface of the composite-pulse toolkit:
#
#   cccp build reduced-skinsc --theta pi --output rskinsc.json
#   cccp timecost --all --theta pi/2 --csv table.csv
#   cccp classify corpse --theta pi/2
#   cccp fidmap reduced-cinbb --theta pi --resolution 101 --output map.csv
#   cccp nogo --resolution 32
#   cccp verify
#
# Conventions
# -----------
# * Angles are radians unless `--degrees` is given; `pi`, `pi/2`, `3pi/2`
#   tokens are accepted anywhere an angle is.
# * Data payloads (JSON documents, CSV) go to `--output`/`--csv` or stdout
#   with `-`; tables and timings go to the terminal, never into payloads.
# * Exit codes: 0 success, 1 usage or input error, 2 domain/formula error,
#   3 verification failure.

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import NoReturn

import structlog
from rich.console import Console

from cccp.core.config import Settings
from cccp.core.errors import PulseError, VerificationError
from cccp.core.logs import configure_logging
from cccp.services import catalog
from cccp.services.acceptance import run_acceptance
from cccp.services.analysis import (
    classify_rep,
    fidelity_map,
    n2_no_go_scan,
    residual_coefficients,
    time_cost,
)
from cccp.services.documents import (
    SequenceDocument,
    TimeCostRow,
    fidelity_csv,
    load_document,
    parse_angle,
    parse_range,
    timecost_csv,
    write_text_atomic,
)
from cccp.services.error_models import first_order_errors
from cccp.services.pulse_library import CorpseWindings
from cccp.services.su2_core import PulseSequence, RotationParams
from cccp.ui import report

log = structlog.get_logger(__name__)

STDOUT = "-"


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 1; 2 is reserved for formula errors."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# =============================================================================
# Helpers
# =============================================================================


def _target(args: argparse.Namespace) -> RotationParams:
    return RotationParams(
        parse_angle(args.theta, degrees=args.degrees),
        parse_angle(args.phi, degrees=args.degrees),
    )


def _windings(text: str) -> CorpseWindings:
    try:
        n1, n2, n3 = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"windings must be three integers 'n1,n2,n3', got {text!r}"
        ) from None
    return CorpseWindings(n1, n2, n3)


def _build(args: argparse.Namespace) -> PulseSequence:
    options = catalog.BuildOptions()
    if getattr(args, "windings", None) is not None:
        options = dataclasses.replace(options, windings=args.windings)
    if getattr(args, "phi_prime", None) is not None:
        phi_prime = parse_angle(args.phi_prime, degrees=args.degrees)
        options = dataclasses.replace(options, phi_prime=phi_prime)
    seq = catalog.build(args.name, _target(args), options)
    log.info(
        "cccp.built",
        name=args.name,
        pulses=len(seq),
        total_angle=sum(abs(p.theta) for p in seq.pulses),
    )
    return seq


def _emit(payload: str, output: str) -> None:
    if output == STDOUT:
        sys.stdout.write(payload)
        sys.stdout.flush()
    else:
        path = write_text_atomic(Path(output), payload)
        log.info("cccp.written", path=str(path), bytes=len(payload.encode("utf-8")))


def _add_target_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", default="pi", help="Target rotation angle θ")
    p.add_argument("--phi", default="0", help="Target axis angle φ")
    p.add_argument(
        "--degrees",
        action="store_true",
        help="Read numeric angles in degrees (pi tokens stay radians)",
    )


# =============================================================================
# Commands
# =============================================================================


def cmd_build(args: argparse.Namespace, settings: Settings) -> int:
    seq = _build(args)
    _emit(SequenceDocument.from_sequence(seq).dumps(), args.output)
    report.sequence_table(Console(stderr=args.output == STDOUT), seq)
    return 0


def cmd_timecost(args: argparse.Namespace, settings: Settings) -> int:
    names = list(catalog.TIMECOST_NAMES) if args.all else args.names
    if not names:
        raise argparse.ArgumentTypeError("give pulse names or --all")
    theta = parse_angle(args.theta, degrees=args.degrees)
    target = RotationParams(theta, 0.0)
    rows: list[TimeCostRow] = []
    for name in names:
        seq = catalog.build(name, target)
        rows.append(TimeCostRow(name, catalog.label(name), len(seq), time_cost(seq)))
    report.timecost_table(Console(stderr=args.csv == STDOUT), rows, theta)
    if args.csv:
        _emit(timecost_csv(rows, theta), args.csv)
    return 0


def cmd_classify(args: argparse.Namespace, settings: Settings) -> int:
    if args.input:
        seq = load_document(args.input).to_sequence()
    elif args.name:
        seq = _build(args)
    else:
        raise argparse.ArgumentTypeError("give a pulse name or --input FILE")
    errs = first_order_errors(seq, step=settings.derivative_step)
    verdict = classify_rep(seq, tol=settings.robust_tol, errors=errs)
    residuals = residual_coefficients(seq, errs)
    report.classification(Console(), seq, verdict, residuals)
    return 0


def cmd_fidmap(args: argparse.Namespace, settings: Settings) -> int:
    seq = _build(args)
    window = (-settings.fidmap_window, settings.fidmap_window)
    fmap = fidelity_map(
        seq,
        parse_range(args.eps_range) if args.eps_range else window,
        parse_range(args.f_range) if args.f_range else window,
        settings.fidmap_resolution if args.resolution is None else args.resolution,
        threads=settings.threads,
    )
    _emit(fidelity_csv(fmap), args.output)
    report.fidmap_summary(Console(stderr=args.output == STDOUT), fmap)
    return 0


def cmd_nogo(args: argparse.Namespace, settings: Settings) -> int:
    start = time.perf_counter()
    result = n2_no_go_scan(
        settings.nogo_resolution if args.resolution is None else args.resolution,
        robust_tol=settings.robust_tol,
        trivial_tol=settings.trivial_tol,
        threads=settings.threads,
    )
    report.nogo_summary(Console(), result, time.perf_counter() - start)
    if not result.ok:
        raise VerificationError(f"{result.violations} robust but non-trivial pairs")
    return 0


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    results = run_acceptance(settings, nogo_resolution=args.nogo_resolution)
    report.checks_table(Console(), results)
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise VerificationError(f"failed checks: {', '.join(failed)}")
    return 0


# =============================================================================
# Parser
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    """CLI parser with one subcommand per verb."""
    ap = _ArgumentParser(
        prog="cccp",
        description=(
            "Composite pulses robust against pulse-length "
            "and off-resonance errors."
        ),
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    ap.add_argument("--config", type=Path, help="Settings file in dotenv syntax")
    ap.add_argument("--threads", type=int, help="Worker threads for grid scans")
    ap.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Override CCCP_LOG_LEVEL",
    )
    ap.add_argument(
        "--log-format", choices=["console", "json"], help="Override CCCP_LOG_FORMAT"
    )
    sub = ap.add_subparsers(dest="cmd", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    build = sub.add_parser(
        "build", help="Write a sequence document", formatter_class=fmt
    )
    build.add_argument("name", choices=catalog.NAMES)
    _add_target_args(build)
    build.add_argument("--phi-prime", help="φ' of the trivial triple (default: φ)")
    build.add_argument("--windings", type=_windings, help="CORPSE windings n1,n2,n3")
    build.add_argument("--output", default=STDOUT, help="Document path or - for stdout")
    build.set_defaults(func=cmd_build)

    tc = sub.add_parser(
        "timecost", help="Pulse count and time cost", formatter_class=fmt
    )
    tc.add_argument("names", nargs="*", default=[], help="Pulse names")
    tc.add_argument("--all", action="store_true", help="Every row of the usual table")
    tc.add_argument("--theta", default="pi", help="Target rotation angle θ")
    tc.add_argument("--degrees", action="store_true", help="Read θ in degrees")
    tc.add_argument("--csv", help="Also write the table as CSV (- for stdout)")
    tc.set_defaults(func=cmd_timecost)

    cl = sub.add_parser(
        "classify", help="REP class and robustness", formatter_class=fmt
    )
    cl.add_argument("name", nargs="?", choices=catalog.NAMES)
    _add_target_args(cl)
    cl.add_argument("--input", type=Path, help="Classify a sequence document instead")
    cl.set_defaults(func=cmd_classify)

    fm = sub.add_parser(
        "fidmap", help="Fidelity over an (ε, f) grid", formatter_class=fmt
    )
    fm.add_argument("name", choices=catalog.NAMES)
    _add_target_args(fm)
    fm.add_argument("--eps-range", help="low,high (default ± CCCP_FIDMAP_WINDOW)")
    fm.add_argument("--f-range", help="low,high (default ± CCCP_FIDMAP_WINDOW)")
    fm.add_argument("--resolution", type=int, help="Samples per axis (>= 2)")
    fm.add_argument("--output", default=STDOUT, help="CSV path or - for stdout")
    fm.set_defaults(func=cmd_fidmap)

    ng = sub.add_parser("nogo", help="Exhaustive two-pulse scan", formatter_class=fmt)
    ng.add_argument("--resolution", type=int, help="Grid points per angle (>= 8)")
    ng.set_defaults(func=cmd_nogo)

    vf = sub.add_parser("verify", help="Run the acceptance checks", formatter_class=fmt)
    vf.add_argument("--nogo-resolution", type=int, help="Resolution of the no-go scan")
    vf.set_defaults(func=cmd_verify)
    return ap


def _settings(args: argparse.Namespace) -> Settings:
    s = Settings.from_env(args.config)
    overrides = {
        k: v
        for k, v in (
            ("threads", args.threads),
            ("log_level", args.log_level),
            ("log_format", args.log_format),
        )
        if v is not None
    }
    if args.threads is not None and args.threads < 1:
        raise argparse.ArgumentTypeError(f"--threads must be >= 1, got {args.threads}")
    return dataclasses.replace(s, **overrides) if overrides else s


def main(argv: Sequence[str] | None = None) -> int:
    """Entrypoint: parse, configure logging, run one verb, map errors to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    command: Callable[[argparse.Namespace, Settings], int] = args.func
    try:
        settings = _settings(args)
        configure_logging(settings.log_level, settings.log_format)
        return command(args, settings)
    except argparse.ArgumentTypeError as e:
        parser.error(str(e))
    except PulseError as e:
        print(f"❌ {args.cmd} failed: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"❌ {args.cmd} failed: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
