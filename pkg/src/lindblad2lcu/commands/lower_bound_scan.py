"""Code for "lindblad2lcu lower-bound-scan"."""

from __future__ import annotations

import logging
from typing import Any
from typing import TYPE_CHECKING

from lindblad2lcu._internal.pool import run_map
from lindblad2lcu.commands._common import check_slope
from lindblad2lcu.commands._common import diamond_effort
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import add_spec_arg
from lindblad2lcu.config import int_list
from lindblad2lcu.dilation import min_delta_scan
from lindblad2lcu.report import Column

if TYPE_CHECKING:
    import argparse

    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs
    from lindblad2lcu.pauli import LindbladSpec

_LOG = logging.getLogger(__name__)

NAME = "lower-bound-scan"

ARGS: CommandArgs = {
    "help": "find the least joint evolution time of N-stage discretizations",
    "description": (
        "For each N, bisects for the smallest per-stage evolution time delta "
        "of the normalized dilation Hamiltonian that keeps every stage within "
        "eps of e^{kt/N L}, and the largest delta below it certified to fail. "
        "Checks that N delta grows like sqrt(N) on both ends of the bracket."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("stages", "N"),
    Column("delta_star", "smallest per-stage evolution time certified to pass"),
    Column("delta_fail", "largest per-stage evolution time certified to fail"),
    Column("total_time_pass", "N * delta_star"),
    Column("total_time_fail", "N * delta_fail"),
)

SLOPE = 0.5
SLOPE_TOLERANCE = 0.1
AGREEMENT_TOLERANCE = 0.1


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu lower-bound-scan" to an ArgumentParser."""
    add_spec_arg(parser)
    parser.add_argument(
        "--t", type=float, default=1.0, help="evolution time (default 1)"
    )
    parser.add_argument(
        "--eps", type=float, default=0.1, help="diamond precision (default 0.1)"
    )
    parser.add_argument(
        "--n-grid",
        type=int_list,
        default=[4, 8, 16, 32, 64, 128, 256],
        help="comma-separated stage counts (default 4,8,...,256)",
    )
    add_run_args(parser)


def _point(
    point: tuple[LindbladSpec, float, int, float, dict[str, int]],
) -> dict[str, Any]:
    spec, t, stages, eps, effort = point
    scan = min_delta_scan(spec, t, stages, eps, **effort)
    _LOG.info(
        "N=%d: delta in (%.6g, %.6g], total (%.6g, %.6g]",
        stages,
        scan.delta_fail,
        scan.delta_star,
        scan.total_time_fail,
        scan.total_time,
    )
    return {
        "stages": stages,
        "delta_star": scan.delta_star,
        "delta_fail": scan.delta_fail,
        "total_time_pass": scan.total_time,
        "total_time_fail": scan.total_time_fail,
    }


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu lower-bound-scan"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "t", "eps", "n_grid")
    spec = config.load_spec()
    effort = diamond_effort(config)
    points = [(spec, args.t, stages, args.eps, effort) for stages in args.n_grid]
    for row in run_map(_point, points, jobs=config.jobs):
        report.add_row(row)

    slopes = [
        check_slope(
            report,
            f"slope_{side}",
            [(row["stages"], row[f"total_time_{side}"]) for row in report.rows],
            low=SLOPE - SLOPE_TOLERANCE,
            high=SLOPE + SLOPE_TOLERANCE,
        )
        for side in ("pass", "fail")
    ]
    gap = abs(slopes[0] - slopes[1])
    report.check(
        "slopes_agree",
        passed=gap <= AGREEMENT_TOLERANCE,
        detail=f"|slope_pass - slope_fail| = {gap:.4f} <= {AGREEMENT_TOLERANCE}",
    )
    return finish(report, config, console)
