from __future__ import annotations

import io
import json
from typing import TYPE_CHECKING

from lindblad2lcu.main import main

if TYPE_CHECKING:
    from tests.conftest import ConsoleFactory


def test_amplitude_damping(console_factory: ConsoleFactory) -> None:
    out = io.StringIO()
    argv = ["oaa-sweep", "--r-grid", "4,8,16,32", "--states", "1", "--format", "json"]
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
    assert meta["check.slope"].startswith("pass")
    assert meta["check.perp_slope"].startswith("pass")
    assert meta["check.q_slope"].startswith("pass")
    assert meta["check.statevector_agrees"].startswith("pass")
    assert meta["check.toy_exact"].startswith("pass")
    errors = [row["oaa_error"] for row in doc["rows"]]
    assert all(a > b for a, b in zip(errors, errors[1:]))
    deviations = [row["q_deviation"] for row in doc["rows"]]
    assert all(a > b > 0 for a, b in zip(deviations, deviations[1:]))
