from __future__ import annotations

from lindblad2lcu._internal.numerics import slope_fit
from lindblad2lcu._internal.numerics import spectral_norm
from lindblad2lcu.dilation import local_approx_compare
from lindblad2lcu.dilation import NotNormalizedHamiltonianError
from lindblad2lcu.dilation import random_joint_hamiltonian
import numpy as np
import pytest

DIMS = (2, 2)


def test_random_joint_hamiltonian(rng: np.random.Generator) -> None:
    h = random_joint_hamiltonian(rng, DIMS)
    assert np.allclose(h, h.conj().T)
    assert spectral_norm(h) == pytest.approx(1.0)


def test_block(rng: np.random.Generator) -> None:
    h = random_joint_hamiltonian(rng, DIMS)
    result = local_approx_compare(h, DIMS, 0.1, rng=rng)
    assert np.allclose(result.g, h[0:2, 0:2])
    assert 0.0 < result.dist <= result.choi_upper


def test_block_diagonal_is_exact() -> None:
    h = np.diag([1.0, -0.5, 0.3, 0.2]).astype(np.complex128)
    result = local_approx_compare(h, DIMS, 0.3)
    assert result.dist < 1e-12
    assert result.choi_upper == pytest.approx(0.0, abs=1e-12)


def test_second_order(rng: np.random.Generator) -> None:
    h = random_joint_hamiltonian(rng, DIMS)
    points = [
        (delta, local_approx_compare(h, DIMS, delta, rng=rng).dist)
        for delta in (0.2, 0.1, 0.05, 0.025)
    ]
    slope, _ = slope_fit(points)
    assert 1.6 <= slope <= 2.4


def test_not_normalized() -> None:
    with pytest.raises(NotNormalizedHamiltonianError):
        local_approx_compare(2.0 * np.eye(4), DIMS, 0.1)
