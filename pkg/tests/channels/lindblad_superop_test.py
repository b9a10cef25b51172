from __future__ import annotations

import math

from lindblad2lcu.channels import exact_evolution
from lindblad2lcu.channels import lindblad_superop
from lindblad2lcu.channels import NegativeTimeError
from lindblad2lcu.channels import Superoperator
from lindblad2lcu.channels import trace_distance
from lindblad2lcu.pauli import LinearCombinationOfPaulis
from lindblad2lcu.pauli import LindbladSpec
from lindblad2lcu.pauli import random_spec
import numpy as np
import pytest


def test_amplitude_damping(ad_spec: LindbladSpec) -> None:
    t = 0.7
    evolution = exact_evolution(ad_spec, t)
    excited = evolution.apply(np.diag([0.0, 1.0]))
    assert np.allclose(excited, np.diag([1 - math.exp(-t), math.exp(-t)]))
    coherence = evolution.apply(np.array([[0, 1], [0, 0]]))
    assert coherence[0, 1] == pytest.approx(math.exp(-t / 2))


def test_hamiltonian_only() -> None:
    spec = LindbladSpec(1, LinearCombinationOfPaulis.of(1, (0.5, "X")))
    t = 0.4
    u = math.cos(0.5 * t) * np.eye(2) - 1j * math.sin(0.5 * t) * np.array(
        [[0, 1], [1, 0]]
    )
    expected = Superoperator.conjugation(u)
    assert np.allclose(exact_evolution(spec, t).matrix, expected.matrix)


def test_trace_preserving(rng: np.random.Generator) -> None:
    spec = random_spec(rng, n=2, m=2, q=2)
    generator = lindblad_superop(spec)
    assert np.allclose(generator.adjoint_apply(np.eye(4)), 0.0, atol=1e-10)
    assert exact_evolution(spec, 0.3).tp_defect() < 1e-10


def test_generator(rng: np.random.Generator) -> None:
    spec = random_spec(rng, n=1, m=2, q=2, ops_norm_at_most=1.0)
    step = 1e-6
    derivative = (exact_evolution(spec, step).matrix - np.eye(4)) / step
    assert np.allclose(derivative, lindblad_superop(spec).matrix, atol=1e-4)


def test_zero_time(ad_spec: LindbladSpec) -> None:
    assert np.allclose(exact_evolution(ad_spec, 0.0).matrix, np.eye(4))


def test_negative_time(ad_spec: LindbladSpec) -> None:
    with pytest.raises(NegativeTimeError):
        exact_evolution(ad_spec, -1.0)


def test_trace_distance() -> None:
    assert trace_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == 1.0
    assert trace_distance(np.eye(2) / 2, np.eye(2) / 2) == 0.0
