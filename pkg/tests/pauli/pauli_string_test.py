from __future__ import annotations

import math

from hypothesis import given
from hypothesis import strategies as st
from lindblad2lcu.pauli import PauliString
import numpy as np
import pytest


@given(
    st.text(alphabet="IXYZ", min_size=1, max_size=3),
    st.floats(min_value=-10.0, max_value=10.0),
)
def test_adjoint(letters: str, phase: float) -> None:
    p = PauliString.from_phase(letters, phase)
    assert np.allclose(p.adjoint().to_matrix(), p.to_matrix().conj().T, atol=1e-12)


def test_from_phase_snaps() -> None:
    assert PauliString.from_phase("Y", math.pi / 2) == PauliString("Y", 1)
    assert PauliString.from_phase("Y", -math.pi / 2) == PauliString("Y", 3)
    assert PauliString.from_phase("X", 2 * math.pi) == PauliString("X")


def test_from_phase_residual() -> None:
    p = PauliString.from_phase("Z", 2.0)
    assert p.quarter == 1
    assert p.residual == pytest.approx(2.0 - math.pi / 2)
    assert p.scalar == pytest.approx(complex(math.cos(2.0), math.sin(2.0)))


def test_with_extra_phase() -> None:
    assert PauliString("X", 3).with_extra_phase(2) == PauliString("X", 1)


def test_str() -> None:
    assert str(PauliString("XZ")) == "XZ"
    assert str(PauliString("Y", 2)) == "e^(i3.14159)Y"


@pytest.mark.parametrize(
    ("letters", "quarter", "residual"),
    [("", 0, 0.0), ("XA", 0, 0.0), ("X", 4, 0.0), ("X", 0, 2.0)],
)
def test_invalid(letters: str, quarter: int, residual: float) -> None:
    with pytest.raises(ValueError, match="."):
        PauliString(letters, quarter, residual)
