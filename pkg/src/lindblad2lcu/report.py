"""Reports: the rows a subcommand measured, its checks and its config.

A report renders as CSV (one "# key=value" line per metadata item, then an
RFC-4180 header and rows) or as JSON ({"meta": ..., "rows": [...]}). The
metadata holds the run config, the package version, every tolerance used and
the outcome of every check, so that two runs with equal configs produce
byte-identical reports.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
from pathlib import Path
from typing import Any
from typing import TYPE_CHECKING

from rich.box import HORIZONTALS
from rich.table import Table
from rich.text import Text

if TYPE_CHECKING:
    from typing import Iterable
    from typing import Mapping

    from rich.console import Console

_LOG = logging.getLogger(__name__)


class Error(Exception):
    """The top-level class for errors produced by this module."""


class UnknownColumnError(Error, ValueError):
    """A row did not match the report's columns."""


class UnknownFormatError(Error, ValueError):
    """A report format other than csv or json was requested."""


@dataclasses.dataclass(frozen=True)
class Column:
    """One report column.

    Attributes:
        name: The CSV header and JSON key.
        description: Shown by --schema.
    """

    name: str
    description: str


@dataclasses.dataclass(frozen=True)
class Check:
    """A named assertion over the measured rows.

    Attributes:
        name: A short identifier.
        passed: The outcome.
        detail: The measured value and the bound it was held to.
    """

    name: str
    passed: bool
    detail: str


def format_value(value: Any) -> Any:
    """A JSON-compatible, deterministic rendering of a measured value."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+}j"
    return str(value)


def _csv_cell(value: Any) -> str:
    value = format_value(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclasses.dataclass
class Report:
    """The output of one subcommand.

    Attributes:
        command: The subcommand name.
        columns: The fixed columns of every row.
        meta: Config, version and tolerances.
        rows: Measured rows, in sweep order.
        checks: Assertions over the rows. The run fails if any fails.
        summary: Derived quantities, such as fitted slopes.
    """

    command: str
    columns: tuple[Column, ...]
    meta: dict[str, Any] = dataclasses.field(default_factory=dict)
    rows: list[dict[str, Any]] = dataclasses.field(default_factory=list)
    checks: list[Check] = dataclasses.field(default_factory=list)
    summary: dict[str, Any] = dataclasses.field(default_factory=dict)

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add_row(self, values: Mapping[str, Any]) -> None:
        """Appends a row.

        Raises:
            UnknownColumnError: If the keys differ from the column names.
        """
        if set(values) != set(self.column_names):
            extra = sorted(set(values) - set(self.column_names))
            missing = sorted(set(self.column_names) - set(values))
            msg = f"row does not match columns: extra {extra}, missing {missing}"
            raise UnknownColumnError(msg)
        self.rows.append({name: values[name] for name in self.column_names})

    def check(self, name: str, *, passed: bool, detail: str) -> bool:
        """Records a check and logs its outcome."""
        self.checks.append(Check(name, bool(passed), detail))
        if passed:
            _LOG.info("check %s passed: %s", name, detail)
        else:
            _LOG.error("check %s FAILED: %s", name, detail)
        return bool(passed)

    def full_meta(self) -> dict[str, Any]:
        """meta, then summary.*, then check.* entries."""
        out = dict(self.meta)
        out.update({f"summary.{k}": format_value(v) for k, v in self.summary.items()})
        for c in self.checks:
            out[f"check.{c.name}"] = ("pass: " if c.passed else "fail: ") + c.detail
        out["passed"] = self.passed
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.full_meta().items():
            buf.write(f"# {key}={_csv_cell(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.column_names)
        for row in self.rows:
            writer.writerow([_csv_cell(row[name]) for name in self.column_names])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "meta": {k: format_value(v) for k, v in self.full_meta().items()},
            "rows": [
                {k: format_value(v) for k, v in row.items()} for row in self.rows
            ],
        }
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"

    def render(self, fmt: str) -> str:
        """The report text in fmt ("csv" or "json").

        Raises:
            UnknownFormatError: For any other format.
        """
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        msg = f"unknown report format {fmt!r}"
        raise UnknownFormatError(msg)

    def table(self) -> Table:
        """A rich table of the rows, for humans."""
        table = Table(
            title=self.command,
            title_justify="left",
            row_styles=["none", "dim"],
            box=HORIZONTALS,
        )
        for name in self.column_names:
            table.add_column(name, no_wrap=True)
        for row in self.rows:
            table.add_row(*(_short(row[name]) for name in self.column_names))
        return table

    def checks_table(self) -> Table:
        table = Table(
            title="checks", title_justify="left", box=HORIZONTALS, show_header=False
        )
        table.add_column("check", style="key", no_wrap=True)
        table.add_column("outcome", no_wrap=True)
        table.add_column("detail")
        for c in self.checks:
            outcome = Text("pass", style="pass") if c.passed else Text("FAIL", "fail")
            table.add_row(c.name, outcome, c.detail)
        return table


def _short(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return _csv_cell(value)


def write_report(
    report: Report, *, fmt: str, out: str | None, console: Console
) -> None:
    """Writes the report to out, or to the console's file.

    With out set, the console gets a rich table of rows and checks instead.
    """
    text = report.render(fmt)
    if out is None:
        console.file.write(text)
        console.file.flush()
        return
    Path(out).write_text(text, encoding="utf-8")
    console.print(report.table())
    console.print()
    console.print(report.checks_table())
    _LOG.info("wrote %s report to %s", fmt, out)


def schema_table(command: str, columns: Iterable[Column]) -> Table:
    """The --schema output: every column and what it holds."""
    table = Table(
        title=f"{command} columns",
        title_justify="left",
        row_styles=["none", "dim"],
        box=HORIZONTALS,
    )
    table.add_column("column", style="key", no_wrap=True)
    table.add_column("description")
    for c in columns:
        table.add_row(c.name, c.description)
    return table
