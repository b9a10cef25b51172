"""Code for "lindblad2lcu mdelta-sweep"."""

from __future__ import annotations

from typing import TYPE_CHECKING

from lindblad2lcu.channels import kraus_to_superop
from lindblad2lcu.channels import M_DELTA_CONSTANT
from lindblad2lcu.commands import _error_sweep
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import print_schema
from lindblad2lcu.lcu import m_delta_kraus

if TYPE_CHECKING:
    import argparse

    from rich.console import Console

    from lindblad2lcu.channels import Superoperator
    from lindblad2lcu.commands._common import CommandArgs
    from lindblad2lcu.pauli import LindbladSpec

NAME = "mdelta-sweep"

ARGS: CommandArgs = {
    "help": "measure the error of one M_delta step",
    "description": (
        "Bounds ||M_delta - e^{delta L}||_diamond for random specs over a grid "
        "of step sizes, and checks the bound and the slope of 2."
    ),
    "epilog": EPILOG,
}

COLUMNS = _error_sweep.COLUMNS

REFERENCE_CONSTANT = 2.0

add_args = _error_sweep.add_args


def m_delta_step(spec: LindbladSpec, delta: float) -> Superoperator:
    """The superoperator of M_delta."""
    return kraus_to_superop(m_delta_kraus(spec, delta))


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu mdelta-sweep"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    return _error_sweep.run(
        console=console,
        args=args,
        approximate=m_delta_step,
        constant=M_DELTA_CONSTANT,
        reference=REFERENCE_CONSTANT,
    )
