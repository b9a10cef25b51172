"""Code for "lindblad2lcu firstorder-sweep"."""

from __future__ import annotations

from typing import TYPE_CHECKING

from lindblad2lcu.channels import first_order_map
from lindblad2lcu.channels import FIRST_ORDER_CONSTANT
from lindblad2lcu.commands import _error_sweep
from lindblad2lcu.commands._common import EPILOG
from lindblad2lcu.commands._common import print_schema

if TYPE_CHECKING:
    import argparse

    from rich.console import Console

    from lindblad2lcu.commands._common import CommandArgs

NAME = "firstorder-sweep"

ARGS: CommandArgs = {
    "help": "measure the error of the first-order map 1 + delta L",
    "description": (
        "Bounds ||e^{delta L} - (1 + delta L)||_diamond for random specs over a "
        "grid of step sizes, and checks the bound and the slope of 2."
    ),
    "epilog": EPILOG,
}

COLUMNS = _error_sweep.COLUMNS

REFERENCE_CONSTANT = 1.0

add_args = _error_sweep.add_args


def command(*, console: Console, args: argparse.Namespace) -> int:
    """Implements "lindblad2lcu firstorder-sweep"."""
    if args.schema:
        return print_schema(console, NAME, COLUMNS)
    return _error_sweep.run(
        console=console,
        args=args,
        approximate=first_order_map,
        constant=FIRST_ORDER_CONSTANT,
        reference=REFERENCE_CONSTANT,
    )
