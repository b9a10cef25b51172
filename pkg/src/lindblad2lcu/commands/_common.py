"""Plumbing shared by the subcommands."""

from __future__ import annotations

import logging
from typing import Any
from typing import TYPE_CHECKING
from typing import TypedDict

from lindblad2lcu._internal.numerics import MIN_FIT_POINTS
from lindblad2lcu._internal.numerics import slope_fit
from lindblad2lcu.config import RunConfig
from lindblad2lcu.report import Report
from lindblad2lcu.report import schema_table
from lindblad2lcu.report import write_report

if TYPE_CHECKING:
    import argparse
    from typing import Iterable

    import numpy as np
    from rich.console import Console

    from lindblad2lcu.report import Column

_LOG = logging.getLogger(__name__)

EPILOG = (
    "Reports go to stdout unless --out is given. "
    "Exit status 1 means a check failed."
)

# shape ranges of randomly sampled specs: n, m and q are drawn from these
RANDOM_N = (1, 2)
RANDOM_M = (1, 2)
RANDOM_Q = (1, 3)


class CommandArgs(TypedDict, total=False):
    """Keyword arguments for ArgumentParser.add_parser()."""

    help: str
    description: str
    epilog: str


def start(
    args: argparse.Namespace, columns: tuple[Column, ...], *params: str
) -> tuple[RunConfig, Report]:
    """Builds the RunConfig and an empty Report with the config as metadata."""
    config = RunConfig.from_args(args, *params)
    return config, Report(config.command, columns, meta=config.meta())


def print_schema(console: Console, name: str, columns: tuple[Column, ...]) -> int:
    """Implements --schema."""
    console.print(schema_table(name, columns))
    return 0


def finish(report: Report, config: RunConfig, console: Console) -> int:
    """Writes the report. Returns 0 if every check passed, else 1."""
    write_report(report, fmt=config.format, out=config.out, console=console)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        _LOG.error("%s: failed checks: %s", report.command, ", ".join(failed))
        return 1
    return 0


def diamond_effort(config: RunConfig) -> dict[str, int]:
    """restarts and iterations for diamond_bounds(), from the run settings."""
    diamond = config.settings["diamond"]
    return {"restarts": diamond["restarts"], "iterations": diamond["iterations"]}


def random_shape(rng: np.random.Generator) -> tuple[int, int, int]:
    """(n, m, q) of a randomly sampled spec."""
    n = int(rng.integers(RANDOM_N[0], RANDOM_N[1] + 1))
    m = int(rng.integers(RANDOM_M[0], RANDOM_M[1] + 1))
    q = int(rng.integers(RANDOM_Q[0], RANDOM_Q[1] + 1))
    return n, m, q


def check_slope(
    report: Report,
    name: str,
    points: Iterable[tuple[float, float]],
    *,
    low: float,
    high: float,
) -> float:
    """Fits a log-log slope, records it and checks low <= slope <= high.

    Non-positive points and fewer than MIN_FIT_POINTS distinct x values
    cannot be fit; they fail the check.
    """
    data = list(points)
    too_few = len({x for x, _ in data}) < MIN_FIT_POINTS
    if too_few or any(x <= 0 or y <= 0 for x, y in data):
        report.check(name, passed=False, detail=f"cannot fit a slope through {data}")
        return float("nan")
    slope, _ = slope_fit(data)
    report.summary[name] = slope
    report.check(
        name,
        passed=low <= slope <= high,
        detail=f"slope {slope:.4f} in [{low}, {high}]",
    )
    return slope


def rows_of(results: Iterable[list[dict[str, Any]]]) -> list[dict[str, Any]]:
    """Flattens per-point row lists, keeping point order."""
    return [row for rows in results for row in rows]
