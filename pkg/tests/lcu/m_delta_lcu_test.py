from __future__ import annotations

import math

from lindblad2lcu.lcu import InvalidDeltaError
from lindblad2lcu.lcu import m_delta_kraus
from lindblad2lcu.lcu import m_delta_lcu
from lindblad2lcu.pauli import LindbladSpec
from lindblad2lcu.pauli import PauliString
from lindblad2lcu.pauli import random_spec
import numpy as np
import pytest


def test_amplitude_damping_weights(ad_spec: LindbladSpec) -> None:
    delta = 0.1
    lcu = m_delta_lcu(ad_spec, delta)
    assert lcu.c == (0.0, 1.0)
    assert lcu.s == pytest.approx((1.0 + delta / 2, math.sqrt(delta)))
    assert lcu.p == pytest.approx(1.0 / ((1.0 + delta / 2) ** 2 + delta))
    assert lcu.rows[0][0].alpha == 1.0
    assert lcu.rows[0][0].label == PauliString("I")
    assert [len(row) for row in lcu.rows] == [5, 2]


def test_matches_kraus(rng: np.random.Generator) -> None:
    spec = random_spec(rng, n=2, m=2, q=2)
    delta = 0.05
    got = m_delta_lcu(spec, delta).kraus().operators
    expected = m_delta_kraus(spec, delta).operators
    assert len(got) == len(expected) == 3
    for a, b in zip(got, expected):
        assert np.allclose(a, b)


def test_row_sums(rng: np.random.Generator) -> None:
    spec = random_spec(rng, n=1, m=2, q=3)
    delta = 0.2
    lcu = m_delta_lcu(spec, delta)
    c = lcu.c
    expected = (
        1.0 + 0.5 * delta * sum(x * x for x in c[1:]) + delta * c[0],
        *(math.sqrt(delta) * x for x in c[1:]),
    )
    assert lcu.s == pytest.approx(expected)


def test_merged(ad_spec: LindbladSpec) -> None:
    lcu = m_delta_lcu(ad_spec, 0.3)
    merged = lcu.merged()
    assert merged.max_row_length == 3
    assert merged.s == pytest.approx(lcu.s)
    assert merged.p == pytest.approx(lcu.p)
    assert merged.rows[0][0] == lcu.rows[0][0]
    for a, b in zip(merged.kraus().operators, lcu.kraus().operators):
        assert np.allclose(a, b)


def test_m_delta_kraus_nearly_tp(ad_spec: LindbladSpec) -> None:
    delta = 0.01
    defect = m_delta_kraus(ad_spec, delta).tp_defect()
    # A_0^dag A_0 carries a (delta/2)^2 K^2 excess
    assert defect == pytest.approx(delta**2 / 4)


def test_zero_delta(ad_spec: LindbladSpec) -> None:
    lcu = m_delta_lcu(ad_spec, 0.0)
    assert lcu.s == (1.0, 0.0)
    assert lcu.p == 1.0


def test_negative_delta(ad_spec: LindbladSpec) -> None:
    with pytest.raises(InvalidDeltaError):
        m_delta_lcu(ad_spec, -0.1)
    with pytest.raises(InvalidDeltaError):
        m_delta_kraus(ad_spec, -0.1)
