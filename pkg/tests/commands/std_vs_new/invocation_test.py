from __future__ import annotations

import io
import json
from typing import TYPE_CHECKING

from lindblad2lcu.main import main
import pytest

if TYPE_CHECKING:
    from tests.conftest import ConsoleFactory


def test_default_grid(console_factory: ConsoleFactory) -> None:
    out = io.StringIO()
    assert (
        main(
            console=console_factory(out),
            err_console=console_factory(io.StringIO()),
            argv=["std-vs-new", "--format", "json"],
        )
        == 0
    )

    doc = json.loads(out.getvalue())
    assert doc["meta"]["passed"] is True
    by_delta = {row["delta"]: row for row in doc["rows"]}
    assert set(by_delta) == {0.04, 0.25, 0.64}
    assert by_delta[0.25]["standard"] == pytest.approx(4 / 9)
    assert by_delta[0.25]["new"] == pytest.approx(0.8)
    assert all(row["new_better"] for row in doc["rows"])


def test_csv(console_factory: ConsoleFactory) -> None:
    out = io.StringIO()
    assert (
        main(
            console=console_factory(out),
            err_console=console_factory(io.StringIO()),
            argv=["std-vs-new", "--delta-grid", "0.25"],
        )
        == 0
    )

    lines = out.getvalue().splitlines()
    assert "# command=std-vs-new" in lines
    assert "# check.closed_forms=pass" in "\n".join(lines)
    header = (
        "delta,standard,standard_expected,new,new_expected,new_measured,new_better"
    )
    assert lines[-2] == header
    assert lines[-1].startswith("0.25,")
    assert lines[-1].endswith(",true")
