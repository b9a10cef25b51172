"""Code for "lindblad2lcu norms"."""

from __future__ import annotations

import logging
from typing import Any
from typing import TYPE_CHECKING

from lindblad2lcu._internal.pool import rng_for
from lindblad2lcu._internal.pool import run_map
from lindblad2lcu._internal.pool import spawn_seeds
from lindblad2lcu.channels import diamond_bounds
from lindblad2lcu.channels import lindblad_superop
from lindblad2lcu.commands._common import diamond_effort
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import random_shape
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import add_spec_arg
from lindblad2lcu.pauli import local_norm
from lindblad2lcu.pauli import ops_norm
from lindblad2lcu.pauli import pauli_norm
from lindblad2lcu.pauli import random_spec
from lindblad2lcu.report import Column

if TYPE_CHECKING:
    import argparse

    import numpy as np
    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs
    from lindblad2lcu.pauli import LindbladSpec

_LOG = logging.getLogger(__name__)

NAME = "norms"

ARGS: CommandArgs = {
    "help": "check the chain of norms on random specs",
    "description": (
        "Bounds the diamond norm of the Lindbladian of random specs (and of "
        "--spec) and checks it against ops_norm, local_norm and pauli_norm."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("sample", "'spec' for --spec, else the random sample index"),
    Column("n", "system qubits"),
    Column("m", "jump operators"),
    Column("q", "largest term count of a row"),
    Column("diamond_lower", "certified lower bound on ||L||_diamond"),
    Column("diamond_upper", "Choi trace norm upper bound on ||L||_diamond"),
    Column("ops_norm", "||H|| + sum_j ||L_j||^2"),
    Column("local_norm", "sum_k beta_0k + sum_j ||L_j||^2"),
    Column("pauli_norm", "sum_k beta_0k + sum_j c_j^2"),
    Column("chain_ok", "diamond_lower <= 2 ops_norm <= 2 local_norm <= 2 pauli_norm"),
    Column("unit_chain_ok", "diamond_lower <= ops_norm (recorded only)"),
)


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu norms" to an ArgumentParser."""
    add_spec_arg(parser)
    parser.add_argument(
        "--samples", type=int, default=100, help="random specs (default 100)"
    )
    add_run_args(parser)


def _row(
    sample: str,
    spec: LindbladSpec,
    rng: np.random.Generator,
    effort: dict[str, int],
) -> dict[str, Any]:
    bounds = diamond_bounds(lindblad_superop(spec), rng=rng, **effort)
    ops, local, pauli = ops_norm(spec), local_norm(spec), pauli_norm(spec)
    slack = 1e-9 * max(1.0, pauli)
    return {
        "sample": sample,
        "n": spec.n,
        "m": spec.m,
        "q": spec.q,
        "diamond_lower": bounds.lower,
        "diamond_upper": bounds.upper,
        "ops_norm": ops,
        "local_norm": local,
        "pauli_norm": pauli,
        "chain_ok": bounds.lower <= 2 * ops + slack
        and ops <= local + slack
        and local <= pauli + slack,
        "unit_chain_ok": bounds.lower <= ops + slack,
    }


def _sample(
    point: tuple[int, np.random.SeedSequence, dict[str, int]],
) -> dict[str, Any]:
    index, seed, effort = point
    rng = rng_for(seed)
    n, m, q = random_shape(rng)
    spec = random_spec(rng, n=n, m=m, q=q)
    _LOG.info("sample %d: n=%d m=%d q=%d", index, n, m, q)
    return _row(str(index), spec, rng, effort)


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu norms"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "samples")
    if args.samples < 0:
        msg = f"--samples must be non-negative, got {args.samples}"
        raise ValueError(msg)
    effort = diamond_effort(config)
    seeds = spawn_seeds(config.seed, args.samples + 1)
    report.add_row(_row("spec", config.load_spec(), rng_for(seeds[0]), effort))
    points = [(i, seeds[i + 1], effort) for i in range(args.samples)]
    for row in run_map(_sample, points, jobs=config.jobs):
        report.add_row(row)

    violations = sum(1 for row in report.rows if not row["chain_ok"])
    unit_violations = sum(1 for row in report.rows if not row["unit_chain_ok"])
    report.summary["unit_chain_violations"] = unit_violations
    report.check(
        "norm_chain",
        passed=violations == 0,
        detail=f"{violations} of {len(report.rows)} specs violate the chain",
    )
    return finish(report, config, console)
