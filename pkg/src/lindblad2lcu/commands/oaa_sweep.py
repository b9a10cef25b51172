"""Code for "lindblad2lcu oaa-sweep"."""

from __future__ import annotations

import logging
from typing import Any
from typing import TYPE_CHECKING

import numpy as np

from lindblad2lcu._internal.numerics import random_unit_vector
from lindblad2lcu._internal.pool import rng_for
from lindblad2lcu._internal.pool import spawn_seeds
from lindblad2lcu.commands._common import check_slope
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import finish
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.commands._common import start
from lindblad2lcu.config import add_run_args
from lindblad2lcu.config import add_spec_arg
from lindblad2lcu.config import int_list
from lindblad2lcu.lcu import build_gadget
from lindblad2lcu.lcu import redundant_unitary_lcu
from lindblad2lcu.oaa import oaa_error
from lindblad2lcu.oaa import perp_residual
from lindblad2lcu.oaa import plan_segment
from lindblad2lcu.oaa import q_operator
from lindblad2lcu.oaa import segment_gadget
from lindblad2lcu.oaa import SegmentPlan
from lindblad2lcu.oaa import TARGET_P
from lindblad2lcu.pauli import PauliString
from lindblad2lcu.report import Column

if TYPE_CHECKING:
    import argparse

    from rich.console import Console

    from lindblad2lcu._internal.numerics import StateVector
    from lindblad2lcu.commands._common import CommandArgs
    from lindblad2lcu.config import RunConfig
    from lindblad2lcu.report import Report

_LOG = logging.getLogger(__name__)

NAME = "oaa-sweep"

ARGS: CommandArgs = {
    "help": "measure the error of one round of amplification",
    "description": (
        "Measures ||F|Psi> - |Phi>|| for segments of r steps and checks that "
        "it falls like 1/r, as do ||P_1 |Psi-perp>|| and the distance of the "
        "eigenvalues of Q from 1/4. Also checks that amplification is exact "
        "for a trace preserving LCU with success parameter 1/4."
    ),
    "epilog": EPILOG,
}

COLUMNS = (
    Column("r", "steps per segment"),
    Column("delta", "step size, with p(delta)^r = 1/4"),
    Column("kappa", "success parameter of the segment"),
    Column("oaa_error", "largest ||F|Psi> - |Phi>|| over the sampled states"),
    Column("error_times_r", "oaa_error * r"),
    Column("perp_residual", "largest ||P_1 |Psi-perp>|| over the sampled states"),
    Column("q_deviation", "max |eigenvalue of Q - 1/4|"),
    Column(
        "statevector_error",
        "oaa_error by dense state vector, when the state fits (else empty)",
    ),
)

SLOPE = -1.0
SLOPE_TOLERANCE = 0.2
# dense cross-checks are skipped above this many amplitudes
STATEVECTOR_LIMIT = 2**16


def add_args(parser: argparse.ArgumentParser) -> None:
    """Add args for "lindblad2lcu oaa-sweep" to an ArgumentParser."""
    add_spec_arg(parser)
    parser.add_argument(
        "--r-grid",
        type=int_list,
        default=[4, 8, 16, 32],
        help="comma-separated steps per segment (default 4,8,16,32)",
    )
    parser.add_argument(
        "--states",
        type=int,
        default=4,
        help="random states besides the basis states (default 4)",
    )
    add_run_args(parser)


def _states(rng: np.random.Generator, dim: int, count: int) -> list[StateVector]:
    out = [np.eye(dim, dtype=np.complex128)[:, i] for i in range(dim)]
    out += [random_unit_vector(rng, dim) for _ in range(count)]
    return out


def _toy_check(report: Report, config: RunConfig) -> None:
    # one step of a unitary channel written with weight 2 has p = 1/4 exactly
    lcu = redundant_unitary_lcu(PauliString("X"), 2.0)
    plan = SegmentPlan(r=1, delta=0.0, p=lcu.p, lcu=lcu)
    gadget = build_gadget(lcu)
    psi = np.array([0.6, 0.8j], dtype=np.complex128)
    errors = [
        oaa_error(plan, gadget, psi, method="reduced"),
        oaa_error(plan, gadget, psi, method="statevector"),
    ]
    tol = config.settings["tolerances"]["oaa_exact"]
    report.summary["toy_error"] = max(errors)
    report.check(
        "toy_exact",
        passed=max(errors) <= tol,
        detail=f"amplification error {max(errors):.3g} <= {tol} at p = 1/4",
    )


def _row(r: int, states: list[StateVector], plan: SegmentPlan) -> dict[str, Any]:
    gadget = segment_gadget(plan)
    error = max(oaa_error(plan, gadget, psi, method="reduced") for psi in states)
    perp = max(perp_residual(plan, gadget, psi, method="reduced") for psi in states)
    q = q_operator(plan, gadget)
    q_deviation = float(np.max(np.abs(np.linalg.eigvalsh(q) - TARGET_P)))
    statevector = None
    if plan.state_dim <= STATEVECTOR_LIMIT:
        statevector = max(
            oaa_error(plan, gadget, psi, method="statevector") for psi in states
        )
    _LOG.info("r=%d: oaa error %.4g", r, error)
    return {
        "r": r,
        "delta": plan.delta,
        "kappa": plan.kappa,
        "oaa_error": error,
        "error_times_r": error * r,
        "perp_residual": perp,
        "q_deviation": q_deviation,
        "statevector_error": statevector,
    }


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu oaa-sweep"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    config, report = start(args, COLUMNS, "r_grid", "states")
    spec = config.load_spec()
    rng = rng_for(spawn_seeds(config.seed, 1)[0])
    states = _states(rng, spec.dim, args.states)
    for r in args.r_grid:
        report.add_row(_row(r, states, plan_segment(spec, r)))

    for name, column in (
        ("slope", "oaa_error"),
        ("perp_slope", "perp_residual"),
        ("q_slope", "q_deviation"),
    ):
        check_slope(
            report,
            name,
            [(row["r"], row[column]) for row in report.rows],
            low=SLOPE - SLOPE_TOLERANCE,
            high=SLOPE + SLOPE_TOLERANCE,
        )
    pairs = [
        (row["oaa_error"], row["statevector_error"])
        for row in report.rows
        if row["statevector_error"] is not None
    ]
    if pairs:
        gap = max(abs(a - b) for a, b in pairs)
        report.check(
            "statevector_agrees",
            passed=gap <= 1e-8,  # noqa: PLR2004
            detail=f"max |reduced - statevector| {gap:.3g} over {len(pairs)} rows",
        )
    _toy_check(report, config)
    return finish(report, config, console)
