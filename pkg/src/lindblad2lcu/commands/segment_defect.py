"""Code for "lindblad2lcu segment-defect"."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from lindblad2lcu._internal.numerics import MIN_FIT_POINTS
from lindblad2lcu._internal.numerics import slope_fit
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import add_spec_arg
from lindblad2lcu.config import int_list
from lindblad2lcu.oaa import plan_segment
from lindblad2lcu.oaa import tp_defect_segment
from lindblad2lcu.pauli import pauli_norm
from lindblad2lcu.report import Column

if TYPE_CHECKING:
    import argparse

    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs

_LOG = logging.getLogger(__name__)

NAME = "segment-defect"

ARGS: CommandArgs = {
    "help": "measure how far a segment's Kraus operators are from trace preserving",
    "description": (
        "For segments of r steps with p(delta)^r = 1/4, measures "
        "||sum_J A_J^dag A_J - I|| and checks it against r (delta P)^2."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("r", "steps per segment"),
    Column("delta", "step size, with p(delta)^r = 1/4"),
    Column("defect", "||sum_J A_J^dag A_J - I||"),
    Column("bound", "r (delta pauli_norm)^2"),
    Column("defect_times_r", "defect * r"),
    Column("bound_times_r", "bound * r, which tends to (ln 2)^2"),
    Column("within_bound", "defect <= bound"),
)

BOUND_TIMES_R_RANGE = (0.3, 0.7)


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu segment-defect" to an ArgumentParser."""
    add_spec_arg(parser)
    parser.add_argument(
        "--r-grid",
        type=int_list,
        default=[2, 4, 8, 16],
        help="comma-separated steps per segment (default 2,4,8,16)",
    )
    add_run_args(parser)


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu segment-defect"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "r_grid")
    spec = config.load_spec()
    norm = pauli_norm(spec)
    for r in args.r_grid:
        plan = plan_segment(spec, r)
        defect = tp_defect_segment(spec, plan)
        bound = r * (plan.delta * norm) ** 2
        _LOG.info("r=%d: defect %.4g, bound %.4g", r, defect, bound)
        report.add_row(
            {
                "r": r,
                "delta": plan.delta,
                "defect": defect,
                "bound": bound,
                "defect_times_r": defect * r,
                "bound_times_r": bound * r,
                "within_bound": defect <= bound * (1 + 1e-9),
            }
        )

    outside = [row["r"] for row in report.rows if not row["within_bound"]]
    report.check(
        "bound",
        passed=not outside,
        detail=f"defect exceeds r (delta P)^2 at r in {outside}",
    )
    last = max(report.rows, key=lambda row: row["r"])
    low, high = BOUND_TIMES_R_RANGE
    report.check(
        "bound_times_r",
        passed=low <= last["bound_times_r"] <= high,
        detail=f"{last['bound_times_r']:.4f} in [{low}, {high}] at r={last['r']}",
    )
    points = [(row["r"], row["defect"]) for row in report.rows if row["defect"] > 0]
    if len({x for x, _ in points}) >= MIN_FIT_POINTS:
        report.summary["defect_slope"] = slope_fit(points)[0]
    return finish(report, config, console)
