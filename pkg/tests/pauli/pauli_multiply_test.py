from __future__ import annotations

import math

from hypothesis import given
from hypothesis import strategies as st
from lindblad2lcu.pauli import pauli_multiply
from lindblad2lcu.pauli import PauliString
from lindblad2lcu.pauli import QubitCountError
import numpy as np
import pytest


@st.composite
def pauli_pairs(draw: st.DrawFn) -> tuple[PauliString, PauliString]:
    n = draw(st.integers(min_value=1, max_value=3))
    letters = st.text(alphabet="IXYZ", min_size=n, max_size=n)
    phases = st.floats(min_value=0.0, max_value=2 * math.pi)
    return (
        PauliString.from_phase(draw(letters), draw(phases)),
        PauliString.from_phase(draw(letters), draw(phases)),
    )


@given(pauli_pairs())
def test_matches_matrix_product(pair: tuple[PauliString, PauliString]) -> None:
    a, b = pair
    got = pauli_multiply(a, b).to_matrix()
    assert np.allclose(got, a.to_matrix() @ b.to_matrix(), atol=1e-12)


@pytest.mark.parametrize(
    ("a", "b", "letters", "quarter"),
    [
        ("X", "Y", "Z", 1),
        ("Y", "X", "Z", 3),
        ("Z", "Z", "I", 0),
        ("XY", "YX", "ZZ", 0),
        ("XI", "IZ", "XZ", 0),
    ],
)
def test_exact_phase(a: str, b: str, letters: str, quarter: int) -> None:
    assert pauli_multiply(PauliString(a), PauliString(b)) == PauliString(
        letters, quarter
    )


def test_qubit_mismatch() -> None:
    with pytest.raises(QubitCountError):
        pauli_multiply(PauliString("X"), PauliString("XX"))
