from __future__ import annotations

from lindblad2lcu._internal.numerics import expm
from lindblad2lcu.channels import superop_to_choi
from lindblad2lcu.dilation import dilation_channel
from lindblad2lcu.dilation import random_joint_hamiltonian
import numpy as np

DIMS = (2, 2)
PLUS = np.full((2, 2), 0.5, dtype=np.complex128)


def test_is_channel(rng: np.random.Generator) -> None:
    channel = dilation_channel(random_joint_hamiltonian(rng, DIMS), DIMS, 0.3)
    assert channel.tp_defect() < 1e-10
    assert superop_to_choi(channel).is_completely_positive()


def test_zero_time(rng: np.random.Generator) -> None:
    channel = dilation_channel(random_joint_hamiltonian(rng, DIMS), DIMS, 0.0)
    assert np.allclose(channel.matrix, np.eye(4))


def test_block_diagonal() -> None:
    h = np.diag([1.0, -0.5, 0.3, 0.2]).astype(np.complex128)
    u = expm(-0.7j * h[0:2, 0:2])
    out = dilation_channel(h, DIMS, 0.7).apply(PLUS)
    assert np.allclose(out, u @ PLUS @ u.conj().T)
