"""Code for "lindblad2lcu truncation"."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from lindblad2lcu._internal.pool import rng_for
from lindblad2lcu._internal.pool import spawn_seeds
from lindblad2lcu.channels import diamond_bounds
from lindblad2lcu.commands._common import diamond_effort
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import add_spec_arg
from lindblad2lcu.config import int_list
from lindblad2lcu.oaa import extract_channel
from lindblad2lcu.oaa import plan_segment
from lindblad2lcu.oaa import segment_gadget
from lindblad2lcu.report import Column
from lindblad2lcu.resources import poisson_h
from lindblad2lcu.resources import poisson_tail
from lindblad2lcu.resources import truncate_ancilla
from lindblad2lcu.resources import truncation_mass

if TYPE_CHECKING:
    import argparse

    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs

_LOG = logging.getLogger(__name__)

NAME = "truncation"

ARGS: CommandArgs = {
    "help": "measure the cost of truncating the ancillas by Hamming weight",
    "description": (
        "Compares the channel of one amplified segment with the same segment "
        "restricted to ancilla Hamming weight at most h."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("r", "steps per segment"),
    Column("h", "largest ancilla Hamming weight kept"),
    Column("poisson_tail", "P[Poisson(3/2) > h]"),
    Column("truncation_mass", "squared amplitude discarded after multi-B"),
    Column("diamond_lower", "certified lower bound on full vs truncated"),
    Column("diamond_upper", "upper bound on full vs truncated"),
    Column("within_bound", "diamond_lower <= DISCREPANCY_FACTOR * eps"),
)

DISCREPANCY_FACTOR = 5.0
# poisson_h of this precision must equal the expected weight
POISSON_CHECK = (1e-3, 6)


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu truncation" to an ArgumentParser."""
    add_spec_arg(parser)
    parser.add_argument(
        "--r", type=int, default=8, help="steps per segment (default 8)"
    )
    parser.add_argument(
        "--eps",
        type=float,
        default=1e-2,
        help="precision that picks h = poisson_h(eps) (default 0.01)",
    )
    parser.add_argument(
        "--h-grid",
        type=int_list,
        default=None,
        help="comma-separated weights to compare instead of poisson_h(eps)",
    )
    add_run_args(parser)


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu truncation"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "r", "eps", "h_grid")
    spec = config.load_spec()
    rng = rng_for(spawn_seeds(config.seed, 1)[0])
    effort = diamond_effort(config)
    grid = args.h_grid if args.h_grid is not None else [poisson_h(args.eps)]
    plan = plan_segment(spec, args.r)
    gadget = segment_gadget(plan)
    full = extract_channel(plan, gadget, method="reduced")
    bound = DISCREPANCY_FACTOR * args.eps
    for h in grid:
        truncated_plan = truncate_ancilla(plan, h)
        truncated = extract_channel(truncated_plan, gadget, method="statevector")
        bounds = diamond_bounds(full - truncated, rng=rng, **effort)
        _LOG.info("r=%d h=%d: discrepancy in [%.3g, %.3g]", args.r, h, *bounds)
        report.add_row(
            {
                "r": args.r,
                "h": h,
                "poisson_tail": poisson_tail(h),
                "truncation_mass": truncation_mass(truncated_plan),
                "diamond_lower": bounds.lower,
                "diamond_upper": bounds.upper,
                "within_bound": bounds.lower <= bound,
            }
        )

    outside = [row["h"] for row in report.rows if not row["within_bound"]]
    report.check(
        "discrepancy",
        passed=not outside,
        detail=f"discrepancy exceeds {bound:.3g} at h in {outside}",
    )
    eps, expected = POISSON_CHECK
    got = poisson_h(eps)
    report.check(
        "poisson_h",
        passed=got == expected,
        detail=f"poisson_h({eps}) = {got}, expected {expected}",
    )
    return finish(report, config, console)
