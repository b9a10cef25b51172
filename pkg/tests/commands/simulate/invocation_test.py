from __future__ import annotations

import io
import json
from typing import TYPE_CHECKING

from lindblad2lcu.main import main
import pytest

if TYPE_CHECKING:
    from pathlib import Path

    from tests.conftest import ConsoleFactory


@pytest.fixture()
def fast_config(tmp_path: Path) -> Path:
    path = tmp_path / "fast.yaml"
    path.write_text("diamond:\n  restarts: 2\n  iterations: 10\n")
    return path


def test_amplitude_damping(console_factory: ConsoleFactory, fast_config: Path) -> None:
    out = io.StringIO()
    argv = [
        "simulate",
        "--t",
        "0.3",
        "--eps",
        "0.05",
        "--config",
        str(fast_config),
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
    meta = doc["meta"]
    assert meta["passed"] is True
    assert meta["diamond.restarts"] == 2
    assert meta["summary.total_lower"] <= 0.05
    assert meta["summary.segments"] == len(doc["rows"])
    assert sum(row["duration"] for row in doc["rows"]) == pytest.approx(0.3)


def test_unachievable(
    console_factory: ConsoleFactory, tmp_path: Path, fast_config: Path
) -> None:
    config = tmp_path / "tight.yaml"
    config.write_text(fast_config.read_text() + "limits:\n  max_r: 2\n")
    err = io.StringIO()
    argv = ["simulate", "--t", "1", "--eps", "1e-9", "--config", str(config)]
    assert (
        main(
            console=console_factory(io.StringIO()),
            err_console=console_factory(err),
            argv=argv,
        )
        == 1
    )
    assert "lindblad2lcu: error: unachievable:" in err.getvalue()


def test_bad_eps(console_factory: ConsoleFactory) -> None:
    err = io.StringIO()
    assert (
        main(
            console=console_factory(io.StringIO()),
            err_console=console_factory(err),
            argv=["simulate", "--eps", "2"],
        )
        == 2
    )
    assert "--eps must be in (0, 1)" in err.getvalue()
