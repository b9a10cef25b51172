"""Code for "lindblad2lcu cost"."""

from __future__ import annotations

from typing import TYPE_CHECKING

from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import add_spec_arg
from lindblad2lcu.config import float_list
from lindblad2lcu.report import Column
from lindblad2lcu.resources import cost_report

if TYPE_CHECKING:
    import argparse

    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs

NAME = "cost"

ARGS: CommandArgs = {
    "help": "count registers and gates of the simulation",
    "description": (
        "Counts segments, steps, truncation weight, register widths and "
        "unit-cost gates for simulating e^{tL} to each precision in --eps-grid."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("n", "system qubits"),
    Column("m", "jump operators"),
    Column("q", "largest term count of a row"),
    Column("t", "evolution time"),
    Column("eps", "target precision"),
    Column("tau", "t * pauli_norm"),
    Column("segments", "ceil(tau / ln 2), at least 1"),
    Column("r", "steps per segment, ceil(2 segments / eps)"),
    Column("h", "truncation weight, poisson_h(eps / (2 segments))"),
    Column("q_dim", "indicator alphabet size, 1 + q + m q^2"),
    Column("multi_u_occurrences", "multi-U gates per segment"),
    Column("total_multi_u", "multi-U gates over all segments"),
    Column("gate_count", "unit-cost gates over all segments"),
    Column("truncation_eps", "Poisson tail that h was chosen against"),
    Column("bits_positions", "ceil(log2(r + 1)) h"),
    Column("bits_indicator", "ceil(log2 q_dim) h"),
    Column("bits_purifier", "ceil(log2(m + 1)) h"),
    Column("C_U", "unit cost of one controlled Pauli"),
    Column("poisson_lambda", "mean of the limiting Poisson distribution"),
)


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu cost" to an ArgumentParser."""
    add_spec_arg(parser)
    parser.add_argument(
        "--t", type=float, default=1.0, help="evolution time (default 1)"
    )
    parser.add_argument(
        "--eps-grid",
        type=float_list,
        default=[1e-1, 1e-2, 1e-3, 1e-4],
        help="comma-separated precisions (default 0.1,0.01,0.001,0.0001)",
    )
    add_run_args(parser)


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu cost"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "t", "eps_grid")
    spec = config.load_spec()
    for eps in args.eps_grid:
        report.add_row(cost_report(spec, args.t, eps).to_dict())

    rows = sorted(report.rows, key=lambda row: -row["eps"])
    monotone = all(
        a["h"] <= b["h"] and a["gate_count"] <= b["gate_count"]
        for a, b in zip(rows, rows[1:])
    )
    report.check(
        "monotone",
        passed=monotone,
        detail="h and gate_count do not decrease as eps decreases",
    )
    return finish(report, config, console)
