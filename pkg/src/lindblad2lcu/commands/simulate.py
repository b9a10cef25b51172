"""Code for "lindblad2lcu simulate"."""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from lindblad2lcu._internal.pool import rng_for
from lindblad2lcu._internal.pool import spawn_seeds
from lindblad2lcu.channels import exact_evolution
from lindblad2lcu.channels import trace_distance
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import add_spec_arg
from lindblad2lcu.oaa import simulate
from lindblad2lcu.oaa import SimulationLimits
from lindblad2lcu.report import Column

if TYPE_CHECKING:
    import argparse

    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs

_LOG = logging.getLogger(__name__)

NAME = "simulate"

ARGS: CommandArgs = {
    "help": "simulate e^{tL} end to end and certify the error",
    "description": (
        "Covers time t with amplified segments, doubling the steps per "
        "segment until the certified diamond distance to e^{tL} is within eps."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("segment", "segment index, in time order"),
    Column("r", "steps per segment"),
    Column("delta", "step size"),
    Column("duration", "evolution time covered, r * delta"),
    Column("kappa", "success parameter after dilution"),
    Column("dilution", "angle of the dilution qubit, empty if none"),
    Column("diamond_lower", "certified lower bound on ||N - e^{L duration}||"),
    Column("diamond_upper", "upper bound on ||N - e^{L duration}||"),
)


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu simulate" to an ArgumentParser."""
    add_spec_arg(parser)
    parser.add_argument(
        "--t", type=float, default=math.log(2), help="evolution time (default ln 2)"
    )
    parser.add_argument(
        "--eps", type=float, default=0.05, help="diamond precision (default 0.05)"
    )
    add_run_args(parser)


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu simulate"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "t", "eps")
    if not 0.0 < args.eps < 1.0:
        msg = f"--eps must be in (0, 1), got {args.eps}"
        raise ValueError(msg)
    spec = config.load_spec()
    limits = SimulationLimits(
        max_qubits=config.settings["limits"]["max_qubits"],
        max_r=config.settings["limits"]["max_r"],
        restarts=config.settings["diamond"]["restarts"],
        iterations=config.settings["diamond"]["iterations"],
    )
    rng = rng_for(spawn_seeds(config.seed, 1)[0])
    result = simulate(spec, args.t, args.eps, limits=limits, rng=rng)
    for index, (plan, bounds) in enumerate(zip(result.plans, result.segment_bounds)):
        report.add_row(
            {
                "segment": index,
                "r": plan.r,
                "delta": plan.delta,
                "duration": plan.duration,
                "kappa": plan.kappa,
                "dilution": plan.dilution,
                "diamond_lower": bounds.lower,
                "diamond_upper": bounds.upper,
            }
        )
    report.summary.update(
        {
            "r": result.r,
            "segments": result.segments,
            "total_lower": result.total.lower,
            "total_upper": result.total.upper,
        }
    )
    report.check(
        "precision",
        passed=result.total.lower <= args.eps,
        detail=f"certified lower bound {result.total.lower:.4g} <= {args.eps}",
    )

    # the most excited basis state, |1><1| for one qubit
    rho = np.zeros((spec.dim, spec.dim), dtype=np.complex128)
    rho[-1, -1] = 1.0
    distance = trace_distance(
        result.channel.apply(rho), exact_evolution(spec, args.t).apply(rho)
    )
    report.summary["output_trace_distance"] = distance
    report.check(
        "output_state",
        passed=distance <= args.eps,
        detail=f"trace distance of the evolved |{spec.dim - 1}> {distance:.4g}",
    )
    _LOG.info("simulated with r=%d over %d segments", result.r, result.segments)
    return finish(report, config, console)
