"""Code for "lindblad2lcu std-vs-new"."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import float_list
from lindblad2lcu.lcu import amplitude_damping_lcu
from lindblad2lcu.lcu import apply_w
from lindblad2lcu.lcu import build_gadget
from lindblad2lcu.lcu import stinespring_comparison
from lindblad2lcu.report import Column

if TYPE_CHECKING:
    import argparse

    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs

NAME = "std-vs-new"

ARGS: CommandArgs = {
    "help": "compare LCU success probabilities for amplitude damping",
    "description": (
        "Compares the success probability of one LCU over every Stinespring "
        "term, 1/(1 + sqrt(delta))^2, with the per-Kraus-row construction, "
        "1/(1 + delta), and measures the latter on the W gadget."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("delta", "damping probability of one step"),
    Column("standard", "success probability of a single LCU"),
    Column("standard_expected", "1 / (1 + sqrt(delta))^2"),
    Column("new", "1 / sum_j s_j^2 of the per-row LCU"),
    Column("new_expected", "1 / (1 + delta)"),
    Column("new_measured", "squared norm of the indicator-0 block, worst basis state"),
    Column("new_better", "new > standard"),
)


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu std-vs-new" to an ArgumentParser."""
    parser.add_argument(
        "--delta-grid",
        type=float_list,
        default=[0.04, 0.25, 0.64],
        help="comma-separated damping probabilities (default 0.04,0.25,0.64)",
    )
    add_run_args(parser)


def _measured(delta: float) -> float:
    gadget = build_gadget(amplitude_damping_lcu(delta))
    norms = []
    for i in range(gadget.sys_dim):
        basis = np.zeros(gadget.sys_dim, dtype=np.complex128)
        basis[i] = 1.0
        success, _ = apply_w(gadget, basis)
        norms.append(float(np.vdot(success, success).real))
    return min(norms)


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu std-vs-new"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "delta_grid")
    for delta in args.delta_grid:
        standard, new = stinespring_comparison(delta)
        report.add_row(
            {
                "delta": delta,
                "standard": standard,
                "standard_expected": 1.0 / (1.0 + math.sqrt(delta)) ** 2,
                "new": new,
                "new_expected": 1.0 / (1.0 + delta),
                "new_measured": _measured(delta),
                "new_better": new > standard,
            }
        )

    tol = config.settings["tolerances"]["probability"]
    worst = max(
        max(
            abs(row["standard"] - row["standard_expected"]),
            abs(row["new"] - row["new_expected"]),
        )
        for row in report.rows
    )
    report.check(
        "closed_forms",
        passed=worst <= tol,
        detail=f"max deviation {worst:.3g} <= {tol}",
    )
    # the channel is trace preserving, so every input succeeds with probability p
    worst_measured = max(abs(row["new_measured"] - row["new"]) for row in report.rows)
    report.check(
        "measured",
        passed=worst_measured <= 1e3 * tol,
        detail=f"max |measured - p| {worst_measured:.3g} <= {1e3 * tol:.3g}",
    )
    better = all(row["new_better"] for row in report.rows)
    report.check(
        "new_better",
        passed=better,
        detail="per-row LCU beats the single LCU at every delta",
    )
    return finish(report, config, console)
