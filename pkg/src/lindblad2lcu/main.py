"""Main code for the lindblad2lcu cli."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import TYPE_CHECKING

from rich.logging import RichHandler

from lindblad2lcu import config
from lindblad2lcu import oaa
from lindblad2lcu import pauli
from lindblad2lcu.commands import cost
from lindblad2lcu.commands import fig1_sweep
from lindblad2lcu.commands import firstorder_sweep
from lindblad2lcu.commands import lemma1
from lindblad2lcu.commands import local_approx
from lindblad2lcu.commands import lower_bound_scan
from lindblad2lcu.commands import mdelta_sweep
from lindblad2lcu.commands import norms
from lindblad2lcu.commands import oaa_sweep
from lindblad2lcu.commands import segment_defect
from lindblad2lcu.commands import simulate
from lindblad2lcu.commands import std_vs_new
from lindblad2lcu.commands import truncation
from lindblad2lcu.console import CONSOLE
from lindblad2lcu.console import ERR_CONSOLE

if TYPE_CHECKING:
    from typing import Sequence

    from rich.console import Console

_LOG = logging.getLogger(__name__)

_DESCRIPTION = """
lindblad2lcu builds, simulates and checks channel-LCU circuits for Lindblad
evolution on a few qubits, against exact matrix exponentials.
"""

_EPILOG = """
Every subcommand writes a CSV or JSON report. Exit status: 0 when every check
passes, 1 when a check fails, 2 for usage, config or spec errors.
"""

_COMMANDS = (
    norms,
    lemma1,
    std_vs_new,
    mdelta_sweep,
    firstorder_sweep,
    oaa_sweep,
    segment_defect,
    simulate,
    truncation,
    cost,
    fig1_sweep,
    lower_bound_scan,
    local_approx,
)

EXIT_FAILED = 1
EXIT_USAGE = 2


def _error(err_console: Console, kind: str, ex: BaseException) -> None:
    err_console.print(
        f"lindblad2lcu: error: {kind}: {ex}",
        markup=False,
        highlight=False,
        soft_wrap=True,
    )


def main(
    *,
    console: Console | None = None,
    err_console: Console | None = None,
    argv: Sequence[str] | None = None,
) -> int:
    """Main function for lindblad2lcu."""
    console = console if console else CONSOLE
    err_console = err_console if err_console else ERR_CONSOLE
    argv = argv if argv is not None else sys.argv[1:]
    parser = argparse.ArgumentParser(description=_DESCRIPTION, epilog=_EPILOG)
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {config.version()}"
    )

    subparsers = parser.add_subparsers(
        dest="command", required=True, help="subcommand (required)"
    )
    commands = {}
    for module in _COMMANDS:
        module.add_args(subparsers.add_parser(module.NAME, **module.ARGS))
        commands[module.NAME] = module

    args = parser.parse_args(argv)

    logging.basicConfig(
        level="DEBUG" if args.verbose else "INFO",
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console)],
        force=True,
    )

    try:
        return commands[args.command].command(console=console, args=args)
    except config.InvalidConfigError as ex:
        _error(err_console, "config", ex)
    except pauli.InvalidSpecError as ex:
        _error(err_console, "spec", ex)
    except OSError as ex:
        _error(err_console, "io", ex)
    except oaa.EpsilonUnachievableError as ex:
        _error(err_console, "unachievable", ex)
        return EXIT_FAILED
    except oaa.LimitsExceededError as ex:
        _error(err_console, "limits", ex)
    except ValueError as ex:
        _error(err_console, "value", ex)
    return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
