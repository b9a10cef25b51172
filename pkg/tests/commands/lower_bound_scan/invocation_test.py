from __future__ import annotations

import io
import json
from typing import TYPE_CHECKING

from lindblad2lcu.main import main
import pytest

if TYPE_CHECKING:
    from tests.conftest import ConsoleFactory


def test_amplitude_damping(console_factory: ConsoleFactory) -> None:
    out = io.StringIO()
    argv = ["lower-bound-scan", "--n-grid", "4,16,64", "--format", "json"]
    assert (
        main(
            console=console_factory(out),
            err_console=console_factory(io.StringIO()),
            argv=argv,
        )
        == 0
    )

    doc = json.loads(out.getvalue())
    meta = doc["meta"]
    assert meta["passed"] is True
    assert 0.4 <= meta["summary.slope_pass"] <= 0.6
    assert 0.4 <= meta["summary.slope_fail"] <= 0.6
    assert meta["check.slopes_agree"].startswith("pass")
    for row in doc["rows"]:
        assert 0.0 < row["delta_fail"] < row["delta_star"]
        assert row["total_time_pass"] == pytest.approx(
            row["stages"] * row["delta_star"]
        )
        assert row["total_time_fail"] == pytest.approx(
            row["stages"] * row["delta_fail"]
        )
