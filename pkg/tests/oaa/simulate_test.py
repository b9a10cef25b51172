from __future__ import annotations

import math

from lindblad2lcu._internal.numerics import trace_norm
from lindblad2lcu.channels import diamond_bounds
from lindblad2lcu.channels import exact_evolution
from lindblad2lcu.channels import NegativeTimeError
from lindblad2lcu.oaa import EpsilonUnachievableError
from lindblad2lcu.oaa import LimitsExceededError
from lindblad2lcu.oaa import simulate
from lindblad2lcu.oaa import SimulationLimits
from lindblad2lcu.pauli import LinearCombinationOfPaulis
from lindblad2lcu.pauli import LindbladSpec
from lindblad2lcu.pauli import random_spec
import numpy as np
import pytest

FAST = SimulationLimits(restarts=2, iterations=10)


def test_amplitude_damping(ad_spec: LindbladSpec) -> None:
    t, eps = 0.3, 0.05
    result = simulate(ad_spec, t, eps, limits=FAST)
    assert result.total.lower <= eps
    assert result.r >= 1
    assert result.r & (result.r - 1) == 0
    assert result.segments == len(result.segment_bounds)
    assert math.fsum(p.duration for p in result.plans) == pytest.approx(t)
    rho = result.channel.apply(np.diag([0.0, 1.0]))
    expected = exact_evolution(ad_spec, t).apply(np.diag([0.0, 1.0]))
    assert np.allclose(rho, expected, atol=eps)


def test_zero_time(ad_spec: LindbladSpec) -> None:
    result = simulate(ad_spec, 0.0, 0.1)
    assert result.segments == 0
    assert np.allclose(result.channel.matrix, np.eye(4))
    assert result.total == (0.0, 0.0)


def test_trivial_lindbladian() -> None:
    result = simulate(LindbladSpec(1, LinearCombinationOfPaulis(1)), 1.0, 0.1)
    assert result.segments == 0
    assert result.total.upper == pytest.approx(0.0)


def test_unachievable(ad_spec: LindbladSpec) -> None:
    limits = SimulationLimits(max_r=2, restarts=2, iterations=10)
    with pytest.raises(EpsilonUnachievableError) as info:
        simulate(ad_spec, 1.0, 1e-9, limits=limits)
    assert info.value.r == 2
    assert info.value.achieved > 1e-9


def test_too_many_qubits(rng: np.random.Generator) -> None:
    spec = random_spec(rng, n=2, m=1, q=1)
    with pytest.raises(LimitsExceededError):
        simulate(spec, 1.0, 0.1, limits=SimulationLimits(max_qubits=1))


def test_negative_time(ad_spec: LindbladSpec) -> None:
    with pytest.raises(NegativeTimeError):
        simulate(ad_spec, -1.0, 0.1)


def test_one_segment_reaches_maximally_mixed(ad_spec: LindbladSpec) -> None:
    result = simulate(ad_spec, math.log(2), 0.05)
    assert result.segments == 1
    assert result.plans[0].dilution is not None
    assert result.total.lower <= 0.05
    rho = result.channel.apply(np.diag([0.0, 1.0]))
    assert 0.5 * trace_norm(rho - 0.5 * np.eye(2)) <= 0.05


def test_two_segments_compose(ad_spec: LindbladSpec) -> None:
    half = simulate(ad_spec, 0.6, 0.05)
    full = simulate(ad_spec, 1.2, 0.05)
    assert half.segments == 1
    assert full.segments == 2
    gap = diamond_bounds(full.channel - half.channel @ half.channel)
    budget = sum(b.upper for b in full.segment_bounds) + 2 * sum(
        b.upper for b in half.segment_bounds
    )
    assert gap.lower <= budget
