from __future__ import annotations

import argparse
import logging
from typing import Any
from typing import TYPE_CHECKING

from lindblad2lcu.config import default_settings
from lindblad2lcu.config import float_list
from lindblad2lcu.config import int_list
from lindblad2lcu.config import InvalidConfigError
from lindblad2lcu.config import load_from_path
from lindblad2lcu.config import RunConfig
from lindblad2lcu.pauli import LindbladSpec
import pytest

if TYPE_CHECKING:
    from pathlib import Path


@pytest.fixture()
def path(tmp_path: Path) -> Path:
    return tmp_path / "config.yaml"


def _args(**kwargs: Any) -> argparse.Namespace:
    values: dict[str, Any] = {
        "command": "norms",
        "seed": 3,
        "jobs": 1,
        "format": "csv",
        "out": None,
        "config": None,
        "samples": 5,
    }
    values.update(kwargs)
    return argparse.Namespace(**values)


def test_malformed(path: Path) -> None:
    path.write_text("malformed, bad text")
    with pytest.raises(InvalidConfigError):
        load_from_path(path)


def test_missing(path: Path) -> None:
    with pytest.raises(InvalidConfigError):
        load_from_path(path)


def test_defaults(path: Path) -> None:
    path.write_text("{}\n")
    assert load_from_path(path) == default_settings()
    assert default_settings() == {
        "tolerances": {"lemma1": 1e-9, "oaa_exact": 1e-10, "probability": 1e-12},
        "diamond": {"restarts": 20, "iterations": 50},
        "limits": {"max_qubits": 3, "max_r": 4096},
    }


def test_partial(path: Path) -> None:
    path.write_text("""
        tolerances:
          lemma1: 1.0e-6
        limits:
          max_r: 64
    """)
    settings = load_from_path(path)
    assert settings["tolerances"]["lemma1"] == 1e-6
    assert settings["tolerances"]["probability"] == 1e-12
    assert settings["limits"] == {"max_qubits": 3, "max_r": 64}
    assert settings["diamond"] == {"restarts": 20, "iterations": 50}


@pytest.mark.parametrize(
    "text",
    [
        "tolerances:\n  lemma1: -1.0\n",
        "tolerances:\n  lemma1: .inf\n",
        "diamond:\n  restarts: 0\n",
        "diamond:\n  restarts: many\n",
        "limits:\n  max_r: 2.5\n",
        "limits: 3\n",
    ],
)
def test_invalid(path: Path, text: str) -> None:
    path.write_text(text)
    with pytest.raises(InvalidConfigError):
        load_from_path(path)


def test_lists() -> None:
    assert float_list("0.2,0.1, 0.05") == [0.2, 0.1, 0.05]
    assert int_list("4,8,16,") == [4, 8, 16]
    for text in ("", "a,b", "1.5"):
        with pytest.raises(argparse.ArgumentTypeError):
            int_list(text)


def test_run_config() -> None:
    config = RunConfig.from_args(_args(), "samples")
    assert config.params == {"samples": 5}
    assert config.spec is None
    assert isinstance(config.load_spec(), LindbladSpec)
    meta = config.meta()
    assert meta["command"] == "norms"
    assert meta["spec"] == "amplitude_damping"
    assert meta["seed"] == 3
    assert meta["param.samples"] == 5
    assert meta["tolerances.lemma1"] == 1e-9
    assert meta["limits.max_r"] == 4096


def test_run_config_from_file(path: Path, ad_spec_path: Path) -> None:
    path.write_text("diamond:\n  restarts: 2\n")
    config = RunConfig.from_args(
        _args(config=str(path), spec=str(ad_spec_path)), "samples"
    )
    assert config.settings["diamond"]["restarts"] == 2
    assert config.meta()["spec"] == str(ad_spec_path)
    assert config.load_spec().m == 1


def test_run_config_jobs() -> None:
    with pytest.raises(InvalidConfigError):
        RunConfig.from_args(_args(jobs=0))


def test_load_spec_logs_summary(caplog: pytest.LogCaptureFixture) -> None:
    config = RunConfig.from_args(_args(), "samples")
    with caplog.at_level(logging.INFO, logger="lindblad2lcu.config"):
        config.load_spec()
    messages = [r.getMessage() for r in caplog.records]
    assert any("amplitude_damping" in m and "'pauli_norm'" in m for m in messages)
