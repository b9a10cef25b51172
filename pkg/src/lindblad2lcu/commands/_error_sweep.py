"""The step-error sweep behind "mdelta-sweep" and "firstorder-sweep".

Both sample random specs with ops_norm at most 1, bound the diamond distance
between a one-step approximation and e^{delta L} over a grid of step sizes,
and check the O(delta^2) scaling.
"""

from __future__ import annotations

import logging
from typing import Any
from typing import Callable
from typing import TYPE_CHECKING

from lindblad2lcu._internal.numerics import MIN_FIT_POINTS
from lindblad2lcu._internal.numerics import slope_fit
from lindblad2lcu._internal.pool import rng_for
from lindblad2lcu._internal.pool import run_map
from lindblad2lcu._internal.pool import spawn_seeds
from lindblad2lcu.channels import diamond_bounds
from lindblad2lcu.channels import exact_evolution
from lindblad2lcu.commands._common import diamond_effort
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import random_shape
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import float_list
from lindblad2lcu.pauli import ops_norm
from lindblad2lcu.pauli import random_spec
from lindblad2lcu.report import Column

if TYPE_CHECKING:
    import argparse

    import numpy as np
    from rich.console import Console

    from lindblad2lcu.channels import Superoperator
    from lindblad2lcu.pauli import LindbladSpec

_LOG = logging.getLogger(__name__)

SLOPE = 2.0
SLOPE_TOLERANCE = 0.15

COLUMNS = (
    Column("sample", "random sample index"),
    Column("n", "system qubits"),
    Column("m", "jump operators"),
    Column("q", "largest term count of a row"),
    Column("ops_norm", "||H|| + sum_j ||L_j||^2, at most 1"),
    Column("delta", "step size"),
    Column("diamond_lower", "certified lower bound on the step error"),
    Column("diamond_upper", "Choi trace norm upper bound on the step error"),
    Column("bound", "proven bound C (delta ops_norm)^2"),
    Column("reference_bound", "reference constant times (delta ops_norm)^2"),
    Column("within_bound", "diamond_lower <= bound"),
    Column("within_reference", "diamond_lower <= reference_bound (recorded only)"),
)

Approximation = Callable[["LindbladSpec", float], "Superoperator"]


def add_args(parser: argparse.ArgumentParser) -> None:
    """The flags shared by both sweeps."""
    parser.add_argument(
        "--samples", type=int, default=10, help="random specs (default 10)"
    )
    parser.add_argument(
        "--delta-grid",
        type=float_list,
        default=[0.2, 0.1, 0.05, 0.025],
        help="comma-separated step sizes (default 0.2,0.1,0.05,0.025)",
    )
    add_run_args(parser)


def _sample(
    point: tuple[
        int,
        np.random.SeedSequence,
        tuple[float, ...],
        Approximation,
        float,
        float,
        dict[str, int],
    ],
) -> list[dict[str, Any]]:
    index, seed, deltas, approximate, constant, reference, effort = point
    rng = rng_for(seed)
    n, m, q = random_shape(rng)
    spec = random_spec(rng, n=n, m=m, q=q, ops_norm_at_most=1.0)
    norm = ops_norm(spec)
    rows = []
    for delta in deltas:
        err = approximate(spec, delta) - exact_evolution(spec, delta)
        bounds = diamond_bounds(err, rng=rng, **effort)
        scale = (delta * norm) ** 2
        rows.append(
            {
                "sample": index,
                "n": n,
                "m": m,
                "q": q,
                "ops_norm": norm,
                "delta": delta,
                "diamond_lower": bounds.lower,
                "diamond_upper": bounds.upper,
                "bound": constant * scale,
                "reference_bound": reference * scale,
                "within_bound": bounds.lower <= constant * scale * (1 + 1e-9),
                "within_reference": bounds.lower <= reference * scale * (1 + 1e-9),
            }
        )
    _LOG.info("sample %d: n=%d m=%d q=%d ops_norm=%.3g", index, n, m, q, norm)
    return rows


def run(
    *,
    console: Console,
    args: argparse.Namespace,
    approximate: Approximation,
    constant: float,
    reference: float,
) -> int:
    """Runs the sweep for one approximation.

    Args:
        console: Where the report goes.
        args: Parsed flags.
        approximate: Maps (spec, delta) to the one-step superoperator. Must be
            a module-level function so that workers can unpickle it.
        constant: The proven constant of the O((delta ops_norm)^2) bound.
        reference: The reference constant, recorded but not enforced.
    """
    config, report = start(args, COLUMNS, "samples", "delta_grid")
    if args.samples < 1:
        msg = f"--samples must be at least 1, got {args.samples}"
        raise ValueError(msg)
    effort = diamond_effort(config)
    seeds = spawn_seeds(config.seed, args.samples)
    deltas = tuple(args.delta_grid)
    points = [
        (i, seeds[i], deltas, approximate, constant, reference, effort)
        for i in range(args.samples)
    ]
    for rows in run_map(_sample, points, jobs=config.jobs):
        for row in rows:
            report.add_row(row)

    outside = sum(1 for row in report.rows if not row["within_bound"])
    report.check(
        "bound",
        passed=outside == 0,
        detail=f"{outside} of {len(report.rows)} points exceed the proven bound",
    )
    report.summary["reference_violations"] = sum(
        1 for row in report.rows if not row["within_reference"]
    )
    slopes = []
    for i in range(args.samples):
        points_i = [
            (row["delta"], row["diamond_lower"])
            for row in report.rows
            if row["sample"] == i and row["diamond_lower"] > 0
        ]
        if len({x for x, _ in points_i}) >= MIN_FIT_POINTS:
            slopes.append(slope_fit(points_i)[0])
    if slopes:
        report.summary["slope_min"] = min(slopes)
        report.summary["slope_max"] = max(slopes)
    low, high = SLOPE - SLOPE_TOLERANCE, SLOPE + SLOPE_TOLERANCE
    report.check(
        "slope",
        passed=len(slopes) == args.samples and all(low <= s <= high for s in slopes),
        detail=(
            f"{len(slopes)} fitted slopes in "
            f"[{min(slopes, default=float('nan')):.4f}, "
            f"{max(slopes, default=float('nan')):.4f}], each within [{low}, {high}]"
        ),
    )
    return finish(report, config, console)
