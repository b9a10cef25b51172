from __future__ import annotations

import io
import json
from typing import TYPE_CHECKING

from lindblad2lcu.main import main

if TYPE_CHECKING:
    from tests.conftest import ConsoleFactory


def test_random_samples(console_factory: ConsoleFactory) -> None:
    out = io.StringIO()
    argv = ["norms", "--samples", "2", "--seed", "7", "--format", "json"]
    assert (
        main(
            console=console_factory(out),
            err_console=console_factory(io.StringIO()),
            argv=argv,
        )
        == 0
    )

    doc = json.loads(out.getvalue())
    assert doc["meta"]["passed"] is True
    assert doc["meta"]["seed"] == 7
    assert all(row["chain_ok"] for row in doc["rows"])


def test_jobs_do_not_change_results(console_factory: ConsoleFactory) -> None:
    reports = []
    for jobs in ("1", "2"):
        out = io.StringIO()
        argv = ["norms", "--samples", "2", "--jobs", jobs, "--format", "json"]
        assert (
            main(
                console=console_factory(out),
                err_console=console_factory(io.StringIO()),
                argv=argv,
            )
            == 0
        )
        reports.append(json.loads(out.getvalue())["rows"])
    assert reports[0] == reports[1]


def test_negative_samples(console_factory: ConsoleFactory) -> None:
    err = io.StringIO()
    assert (
        main(
            console=console_factory(io.StringIO()),
            err_console=console_factory(err),
            argv=["norms", "--samples", "-1"],
        )
        == 2
    )
    assert "lindblad2lcu: error: value:" in err.getvalue()
