from __future__ import annotations

from lindblad2lcu._internal.numerics import DimensionMismatchError
from lindblad2lcu.channels import compose_all
from lindblad2lcu.channels import Superoperator
import numpy as np
import pytest

X = np.array([[0, 1], [1, 0]])
H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
ZERO = np.diag([1.0, 0.0])


def test_conjugation() -> None:
    assert np.allclose(Superoperator.conjugation(X).apply(ZERO), np.diag([0.0, 1.0]))


def test_compose_order() -> None:
    x, h = Superoperator.conjugation(X), Superoperator.conjugation(H)
    got = compose_all([x, h], 2).apply(ZERO)
    assert np.allclose(got, H @ X @ ZERO @ X @ H)
    assert np.allclose((h @ x).apply(ZERO), got)


def test_arithmetic() -> None:
    x = Superoperator.conjugation(X)
    one = Superoperator.identity(2)
    assert np.allclose((x - one + one).matrix, x.matrix)
    assert np.allclose((2 * x).matrix, (x * 2).matrix)
    assert np.allclose(x.power(2).matrix, one.matrix)
    assert np.allclose(x.power(0).matrix, one.matrix)


def test_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        Superoperator.identity(2) + Superoperator.identity(3)
    with pytest.raises(DimensionMismatchError):
        compose_all([Superoperator.identity(3)], 2)
