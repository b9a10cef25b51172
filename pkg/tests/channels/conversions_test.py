from __future__ import annotations

from lindblad2lcu._internal.numerics import DimensionMismatchError
from lindblad2lcu.channels import choi_to_superop
from lindblad2lcu.channels import KrausChannel
from lindblad2lcu.channels import kraus_to_choi
from lindblad2lcu.channels import kraus_to_superop
from lindblad2lcu.channels import superop_to_choi
from lindblad2lcu.channels import Superoperator
from lindblad2lcu.channels import unvec
from lindblad2lcu.channels import vec
import numpy as np
import pytest


def _random_channel(rng: np.random.Generator, dim: int, count: int) -> KrausChannel:
    z = rng.normal(size=(dim * count, dim)) + 1j * rng.normal(size=(dim * count, dim))
    isometry, _ = np.linalg.qr(z)
    return KrausChannel.of(isometry[k * dim : (k + 1) * dim] for k in range(count))


@pytest.fixture()
def channel(rng: np.random.Generator) -> KrausChannel:
    return _random_channel(rng, 3, 2)


@pytest.fixture()
def rho(rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    m = z @ z.conj().T
    return m / np.trace(m)


def test_vec_column_stacking() -> None:
    x = np.array([[1, 2], [3, 4]])
    assert np.array_equal(vec(x), [1, 3, 2, 4])
    assert np.array_equal(unvec(vec(x), 2), x)


def test_random_channel_is_tp(channel: KrausChannel) -> None:
    assert channel.is_trace_preserving()
    assert kraus_to_superop(channel).tp_defect() < 1e-10
    assert kraus_to_choi(channel).tp_defect() < 1e-10


def test_superop_apply(channel: KrausChannel, rho: np.ndarray) -> None:
    s = kraus_to_superop(channel)
    assert np.allclose(s.apply(rho), channel.apply(rho))


def test_adjoint_apply(channel: KrausChannel, rho: np.ndarray) -> None:
    s = kraus_to_superop(channel)
    x = np.diag([1.0, -2.0, 0.5])
    lhs = np.trace(x.conj().T @ s.apply(rho))
    rhs = np.trace(s.adjoint_apply(x).conj().T @ rho)
    assert lhs == pytest.approx(rhs)


def test_choi(channel: KrausChannel) -> None:
    choi = kraus_to_choi(channel)
    assert np.allclose(superop_to_choi(kraus_to_superop(channel)).matrix, choi.matrix)
    assert choi.is_completely_positive()
    assert np.allclose(choi_to_superop(choi).matrix, kraus_to_superop(channel).matrix)


def test_choi_output_factor_first() -> None:
    # the map |i><j| -> |0><0| delta_ij, i.e. reset to |0>
    reset = KrausChannel.of([[[1, 0], [0, 0]], [[0, 1], [0, 0]]])
    choi = kraus_to_choi(reset)
    expected = np.kron(np.diag([1.0, 0.0]), np.eye(2))
    assert np.allclose(choi.matrix, expected)


def test_transpose_not_cp() -> None:
    swap = np.eye(4)[[0, 2, 1, 3]]
    transpose = Superoperator(2, swap.astype(np.complex128))
    choi = superop_to_choi(transpose)
    assert choi.is_hermitian()
    assert choi.min_eigenvalue() == pytest.approx(-1.0)
    assert not choi.is_completely_positive()
    assert choi.tp_defect() < 1e-12


def test_not_tp() -> None:
    shrink = KrausChannel.of([0.5 * np.eye(2)])
    assert shrink.tp_defect() == pytest.approx(0.75)
    assert not shrink.is_trace_preserving()
    assert kraus_to_superop(shrink).tp_defect() == pytest.approx(0.75)
    assert kraus_to_choi(shrink).tp_defect() == pytest.approx(0.75)


def test_kraus_dimension_errors() -> None:
    with pytest.raises(DimensionMismatchError):
        KrausChannel(())
    with pytest.raises(DimensionMismatchError):
        KrausChannel.of([np.eye(2), np.eye(3)])
    with pytest.raises(DimensionMismatchError):
        Superoperator(2, np.eye(3, dtype=np.complex128))
