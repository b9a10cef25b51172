from __future__ import annotations

import math

from lindblad2lcu.channels import NegativeTimeError
from lindblad2lcu.oaa import plan_evolution
from lindblad2lcu.oaa import plan_segment
from lindblad2lcu.oaa import SegmentTooLongError
from lindblad2lcu.pauli import LindbladSpec
import pytest


def test_full_segment(ad_spec: LindbladSpec) -> None:
    plan = plan_segment(ad_spec, 4)
    assert plan.dilution is None
    assert plan.kappa == pytest.approx(0.25)
    assert (plan.q_dim, plan.m_dim, plan.sys_dim) == (3, 2, 2)
    assert plan.dims == (3, 2, 3, 2, 3, 2, 3, 2, 2)
    assert plan.state_dim == 6**4 * 2


def test_diluted_segment(ad_spec: LindbladSpec) -> None:
    plan = plan_segment(ad_spec, 4, delta=0.05)
    assert plan.dilution is not None
    assert plan.kappa == pytest.approx(0.25)
    assert plan.dims[0] == 2
    assert plan.duration == pytest.approx(0.2)


def test_too_long(ad_spec: LindbladSpec) -> None:
    with pytest.raises(SegmentTooLongError):
        plan_segment(ad_spec, 4, delta=0.5)


def test_truncation_range(ad_spec: LindbladSpec) -> None:
    assert plan_segment(ad_spec, 4, h=2).h == 2
    with pytest.raises(ValueError, match="truncation"):
        plan_segment(ad_spec, 4, h=5)


def test_evolution(ad_spec: LindbladSpec) -> None:
    t = 1.0
    plans = plan_evolution(ad_spec, t, 4)
    full = plan_segment(ad_spec, 4)
    assert len(plans) == math.ceil(t / full.duration)
    assert all(p == full for p in plans[:-1])
    assert plans[-1].dilution is not None
    assert math.fsum(p.duration for p in plans) == pytest.approx(t)


def test_exact_multiple(ad_spec: LindbladSpec) -> None:
    full = plan_segment(ad_spec, 2)
    plans = plan_evolution(ad_spec, 3 * full.duration, 2)
    assert len(plans) == 3
    assert all(p.dilution is None for p in plans)


def test_zero_time(ad_spec: LindbladSpec) -> None:
    assert plan_evolution(ad_spec, 0.0, 4) == []


def test_negative_time(ad_spec: LindbladSpec) -> None:
    with pytest.raises(NegativeTimeError):
        plan_evolution(ad_spec, -1.0, 4)
