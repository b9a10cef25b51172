"""Code for "lindblad2lcu fig1-sweep"."""

from __future__ import annotations

import logging
import math
from typing import Any
from typing import TYPE_CHECKING

from lindblad2lcu._internal.pool import rng_for
from lindblad2lcu._internal.pool import run_map
from lindblad2lcu._internal.pool import spawn_seeds
from lindblad2lcu.channels import diamond_bounds
from lindblad2lcu.channels import exact_evolution
from lindblad2lcu.commands._common import check_slope
from lindblad2lcu.commands._common import diamond_effort
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import add_spec_arg
from lindblad2lcu.config import int_list
from lindblad2lcu.dilation import build_j
from lindblad2lcu.dilation import fig1_evolve
from lindblad2lcu.report import Column

if TYPE_CHECKING:
    import argparse

    import numpy as np
    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs
    from lindblad2lcu.pauli import LindbladSpec

_LOG = logging.getLogger(__name__)

NAME = "fig1-sweep"

ARGS: CommandArgs = {
    "help": "measure the reset-and-evolve circuit against e^{tL}",
    "description": (
        "Repeats N stages of ancilla reset, e^{-iJ sqrt(t/N)} and "
        "e^{-iH t/N}, and bounds the diamond distance to e^{tL} for each N."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("stages", "N"),
    Column("diamond_lower", "certified lower bound on the error"),
    Column("diamond_upper", "upper bound on the error"),
    Column("guarantee", "sqrt(t^3 / N)"),
    Column("within_guarantee", "diamond_upper <= guarantee"),
)

MAX_SLOPE = -0.4


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu fig1-sweep" to an ArgumentParser."""
    add_spec_arg(parser)
    parser.add_argument(
        "--t", type=float, default=1.0, help="evolution time (default 1)"
    )
    parser.add_argument(
        "--n-grid",
        type=int_list,
        default=[16, 32, 64, 128, 256, 512, 1024],
        help="comma-separated stage counts (default 16,32,...,1024)",
    )
    add_run_args(parser)


def _point(
    point: tuple[LindbladSpec, float, int, np.random.SeedSequence, dict[str, int]],
) -> dict[str, Any]:
    spec, t, stages, seed, effort = point
    err = fig1_evolve(build_j(spec), t, stages) - exact_evolution(spec, t)
    bounds = diamond_bounds(err, rng=rng_for(seed), **effort)
    guarantee = math.sqrt(t**3 / stages)
    _LOG.info("N=%d: error in [%.3g, %.3g]", stages, *bounds)
    return {
        "stages": stages,
        "diamond_lower": bounds.lower,
        "diamond_upper": bounds.upper,
        "guarantee": guarantee,
        "within_guarantee": bounds.upper <= guarantee,
    }


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu fig1-sweep"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "t", "n_grid")
    spec = config.load_spec()
    effort = diamond_effort(config)
    seeds = spawn_seeds(config.seed, len(args.n_grid))
    points = [
        (spec, args.t, stages, seed, effort)
        for stages, seed in zip(args.n_grid, seeds)
    ]
    for row in run_map(_point, points, jobs=config.jobs):
        report.add_row(row)

    outside = [row["stages"] for row in report.rows if not row["within_guarantee"]]
    report.check(
        "guarantee",
        passed=not outside,
        detail=f"error exceeds sqrt(t^3/N) at N in {outside}",
    )
    check_slope(
        report,
        "slope",
        [(row["stages"], row["diamond_lower"]) for row in report.rows],
        low=-math.inf,
        high=MAX_SLOPE,
    )
    return finish(report, config, console)
