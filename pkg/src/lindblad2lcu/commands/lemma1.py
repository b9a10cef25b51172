"""Code for "lindblad2lcu lemma1"."""

from __future__ import annotations

import logging
from typing import Any
from typing import TYPE_CHECKING

from lindblad2lcu._internal.numerics import random_unit_vector
from lindblad2lcu._internal.pool import rng_for
from lindblad2lcu._internal.pool import run_map
from lindblad2lcu._internal.pool import spawn_seeds
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import random_shape
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.lcu import build_gadget
from lindblad2lcu.lcu import lemma1_residual
from lindblad2lcu.lcu import m_delta_lcu
from lindblad2lcu.oaa import success_parameter
from lindblad2lcu.pauli import random_spec
from lindblad2lcu.report import Column

if TYPE_CHECKING:
    import argparse

    import numpy as np
    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs

_LOG = logging.getLogger(__name__)

NAME = "lemma1"

ARGS: CommandArgs = {
    "help": "check the W gadget's success block on random specs",
    "description": (
        "Builds the W gadget of M_delta for random specs and checks that the "
        "indicator-0 block of W|0>|mu>|psi> equals sqrt(p) sum_j |j> A_j|psi>."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("sample", "random sample index"),
    Column("n", "system qubits"),
    Column("m", "jump operators"),
    Column("q", "largest term count of a row"),
    Column("delta", "step size"),
    Column("q_dim", "indicator dimension"),
    Column("p", "1 / sum_j s_j^2 of the LCU"),
    Column("p_closed_form", "1 / (1 + 2 delta P + delta^2 (c_0 + sum c_j^2 / 2)^2)"),
    Column("max_residual", "largest residual over the sampled states"),
)

_DELTA_RANGE = (0.01, 0.5)


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu lemma1" to an ArgumentParser."""
    parser.add_argument(
        "--samples", type=int, default=50, help="random specs (default 50)"
    )
    parser.add_argument(
        "--states", type=int, default=10, help="random states per spec (default 10)"
    )
    add_run_args(parser)


def _sample(point: tuple[int, np.random.SeedSequence, int]) -> dict[str, Any]:
    index, seed, states = point
    rng = rng_for(seed)
    n, m, q = random_shape(rng)
    spec = random_spec(rng, n=n, m=m, q=q)
    delta = float(rng.uniform(*_DELTA_RANGE))
    gadget = build_gadget(m_delta_lcu(spec, delta))
    residual = max(
        lemma1_residual(gadget, random_unit_vector(rng, spec.dim))
        for _ in range(states)
    )
    _LOG.info("sample %d: q_dim=%d residual %.3g", index, gadget.q_dim, residual)
    return {
        "sample": index,
        "n": n,
        "m": m,
        "q": q,
        "delta": delta,
        "q_dim": gadget.q_dim,
        "p": gadget.p,
        "p_closed_form": success_parameter(spec, delta),
        "max_residual": residual,
    }


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu lemma1"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "samples", "states")
    if args.samples < 1 or args.states < 1:
        msg = "--samples and --states must be at least 1"
        raise ValueError(msg)
    seeds = spawn_seeds(config.seed, args.samples)
    points = [(i, seeds[i], args.states) for i in range(args.samples)]
    for row in run_map(_sample, points, jobs=config.jobs):
        report.add_row(row)

    tolerances = config.settings["tolerances"]
    worst = max(row["max_residual"] for row in report.rows)
    report.summary["max_residual"] = worst
    report.check(
        "success_block",
        passed=worst <= tolerances["lemma1"],
        detail=f"max residual {worst:.3g} <= {tolerances['lemma1']}",
    )
    worst_p = max(abs(row["p"] - row["p_closed_form"]) for row in report.rows)
    report.check(
        "success_parameter",
        passed=worst_p <= tolerances["probability"],
        detail=f"max |p - closed form| {worst_p:.3g} <= {tolerances['probability']}",
    )
    return finish(report, config, console)
