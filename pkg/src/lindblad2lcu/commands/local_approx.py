"""Code for "lindblad2lcu local-approx"."""

from __future__ import annotations

import logging
import statistics
from typing import Any
from typing import TYPE_CHECKING

from lindblad2lcu._internal.numerics import MIN_FIT_POINTS
from lindblad2lcu._internal.numerics import slope_fit
from lindblad2lcu._internal.pool import rng_for
from lindblad2lcu._internal.pool import run_map
from lindblad2lcu._internal.pool import spawn_seeds
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import float_list
from lindblad2lcu.dilation import local_approx_compare
from lindblad2lcu.dilation import random_joint_hamiltonian
from lindblad2lcu.report import Column

if TYPE_CHECKING:
    import argparse

    import numpy as np
    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs

_LOG = logging.getLogger(__name__)

NAME = "local-approx"

ARGS: CommandArgs = {
    "help": "compare a dilation channel with evolution by its (0, 0) block",
    "description": (
        "For random joint Hamiltonians H with ||H|| = 1, bounds the distance "
        "between N_{H delta} and e^{-iG delta} . e^{iG delta}, where G is the "
        "(0, 0) block of H, and checks that it falls like delta^2."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("sample", "random sample index"),
    Column("delta", "evolution time"),
    Column("dist", "lower bound on the induced trace norm distance"),
    Column("choi_upper", "Choi trace norm upper bound on the diamond distance"),
)

SLOPE = 2.0
SLOPE_TOLERANCE = 0.2
# (ancilla, system) dimensions of the sampled Hamiltonians
DIMS = (2, 2)


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu local-approx" to an ArgumentParser."""
    parser.add_argument(
        "--samples", type=int, default=5, help="random Hamiltonians (default 5)"
    )
    parser.add_argument(
        "--delta-grid",
        type=float_list,
        default=[0.2, 0.1, 0.05, 0.025],
        help="comma-separated evolution times (default 0.2,0.1,0.05,0.025)",
    )
    add_run_args(parser)


def _sample(
    point: tuple[int, np.random.SeedSequence, tuple[float, ...]],
) -> list[dict[str, Any]]:
    index, seed, deltas = point
    rng = rng_for(seed)
    h = random_joint_hamiltonian(rng, DIMS)
    rows = []
    for delta in deltas:
        result = local_approx_compare(h, DIMS, delta, rng=rng)
        rows.append(
            {
                "sample": index,
                "delta": delta,
                "dist": result.dist,
                "choi_upper": result.choi_upper,
            }
        )
    _LOG.info("sample %d done", index)
    return rows


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu local-approx"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "samples", "delta_grid")
    if args.samples < 1:
        msg = f"--samples must be at least 1, got {args.samples}"
        raise ValueError(msg)
    seeds = spawn_seeds(config.seed, args.samples)
    deltas = tuple(args.delta_grid)
    points = [(i, seeds[i], deltas) for i in range(args.samples)]
    for rows in run_map(_sample, points, jobs=config.jobs):
        for row in rows:
            report.add_row(row)

    slopes = []
    for i in range(args.samples):
        data = [
            (row["delta"], row["dist"])
            for row in report.rows
            if row["sample"] == i and row["dist"] > 0
        ]
        if len({x for x, _ in data}) >= MIN_FIT_POINTS:
            slopes.append(slope_fit(data)[0])
    mean = statistics.fmean(slopes) if slopes else float("nan")
    report.summary["slope"] = mean
    low, high = SLOPE - SLOPE_TOLERANCE, SLOPE + SLOPE_TOLERANCE
    report.check(
        "slope",
        passed=len(slopes) == args.samples and low <= mean <= high,
        detail=f"mean slope {mean:.4f} over {len(slopes)} samples in [{low}, {high}]",
    )
    return finish(report, config, console)
