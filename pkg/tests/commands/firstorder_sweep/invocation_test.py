from __future__ import annotations

import io
import json
from typing import TYPE_CHECKING

from lindblad2lcu.main import main

if TYPE_CHECKING:
    from tests.conftest import ConsoleFactory


def test_random_samples(console_factory: ConsoleFactory) -> None:
    out = io.StringIO()
    argv = [
        "firstorder-sweep",
        "--samples",
        "2",
        "--delta-grid",
        "0.05,0.025,0.0125",
        "--format",
        "json",
    ]
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
    assert len(doc["rows"]) == 6
    assert all(row["within_bound"] for row in doc["rows"])
    assert 1.85 <= doc["meta"]["summary.slope_min"]
    assert doc["meta"]["summary.slope_max"] <= 2.15
