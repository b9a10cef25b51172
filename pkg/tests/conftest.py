from __future__ import annotations

from pathlib import Path
from typing import Protocol
from typing import TYPE_CHECKING

from lindblad2lcu.console import THEME
from lindblad2lcu.pauli import amplitude_damping
from lindblad2lcu.pauli import LindbladSpec
import numpy as np
import pytest
from rich.console import Console

if TYPE_CHECKING:
    from typing import IO

FIXTURES = Path(__file__).parent / "fixtures"


class ConsoleFactory(Protocol):
    def __call__(self, file: IO[str] | None = None) -> Console: ...


@pytest.fixture()
def console_factory() -> ConsoleFactory:
    def inner(file: IO[str] | None = None) -> Console:
        return Console(
            file=file, theme=THEME, width=88, height=30, color_system="truecolor"
        )

    return inner


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture()
def ad_spec() -> LindbladSpec:
    return amplitude_damping()


@pytest.fixture()
def ad_spec_path() -> Path:
    return FIXTURES / "amplitude_damping.json"
