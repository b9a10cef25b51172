from __future__ import annotations

from lindblad2lcu._internal.numerics import expm
from lindblad2lcu._internal.numerics import NonSquareError
import numpy as np
import pytest
import scipy.linalg


@pytest.mark.parametrize("scale", [0.01, 1.0, 30.0])
def test_matches_scipy(rng: np.random.Generator, scale: float) -> None:
    m = scale * (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    expected = scipy.linalg.expm(m)
    got = expm(m)
    assert np.allclose(got, expected, rtol=1e-9, atol=1e-9 * np.abs(expected).max())


def test_zero() -> None:
    assert np.allclose(expm(np.zeros((3, 3))), np.eye(3))


def test_pauli_rotation() -> None:
    x = np.array([[0, 1], [1, 0]])
    theta = 0.3
    expected = np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * x
    assert np.allclose(expm(-1j * theta * x), expected, atol=1e-14)


def test_non_square() -> None:
    with pytest.raises(NonSquareError):
        expm(np.zeros((2, 3)))
