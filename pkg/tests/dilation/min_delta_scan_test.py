from __future__ import annotations

import math

from lindblad2lcu._internal.numerics import slope_fit
from lindblad2lcu.dilation import build_j
from lindblad2lcu.dilation import discretization_check
from lindblad2lcu.dilation import InvalidStagesError
from lindblad2lcu.dilation import min_delta_scan
from lindblad2lcu.dilation import NoPassingDeltaError
from lindblad2lcu.pauli import LinearCombinationOfPaulis
from lindblad2lcu.pauli import LindbladSpec
import pytest


def test_check_without_evolution(ad_spec: LindbladSpec) -> None:
    result = discretization_check(build_j(ad_spec), ad_spec, 1.0, 4, 0.0, 0.1)
    assert len(result.per_stage_errors) == 4
    assert not result.passed
    assert result.certified_fail
    assert result.total_time == 0.0


def test_refine_only_raises_lower_bounds(ad_spec: LindbladSpec) -> None:
    d = build_j(ad_spec)
    delta = 0.357408
    plain = discretization_check(d, ad_spec, math.log(2), 4, delta, 0.25)
    refined = discretization_check(
        d, ad_spec, math.log(2), 4, delta, 0.25, refine=True
    )
    for a, b in zip(plain.per_stage_errors, refined.per_stage_errors):
        assert b.upper == a.upper
        assert b.lower >= a.lower
        assert b.lower <= b.upper


def test_scan_brackets(ad_spec: LindbladSpec) -> None:
    d = build_j(ad_spec)
    scan = min_delta_scan(ad_spec, 1.0, 8, 0.1)
    assert 0.0 < scan.delta_fail < scan.delta_star
    assert scan.total_time == pytest.approx(8 * scan.delta_star)
    assert scan.total_time_fail == pytest.approx(8 * scan.delta_fail)
    assert discretization_check(d, ad_spec, 1.0, 8, scan.delta_star, 0.1).passed
    failing = discretization_check(
        d, ad_spec, 1.0, 8, scan.delta_fail, 0.1, refine=True
    )
    assert failing.certified_fail
    assert not failing.passed


def test_fail_end_is_certified_at_ln2(ad_spec: LindbladSpec) -> None:
    # the sandwich lower bound alone is only half the upper bound here
    d = build_j(ad_spec)
    t = math.log(2)
    scan = min_delta_scan(ad_spec, t, 4, 0.25)
    assert 0.0 < scan.delta_fail < scan.delta_star
    failing = discretization_check(d, ad_spec, t, 4, scan.delta_fail, 0.25, refine=True)
    assert failing.certified_fail
    assert max(b.lower for b in failing.per_stage_errors) > 0.25


def test_total_time_grows_like_sqrt(ad_spec: LindbladSpec) -> None:
    passing = []
    failing = []
    for stages in (4, 16, 64):
        scan = min_delta_scan(ad_spec, 1.0, stages, 0.1)
        passing.append((stages, scan.total_time))
        failing.append((stages, scan.total_time_fail))
    slope_pass, _ = slope_fit(passing)
    slope_fail, _ = slope_fit(failing)
    assert 0.4 <= slope_pass <= 0.6
    assert 0.4 <= slope_fail <= 0.6
    assert abs(slope_pass - slope_fail) <= 0.1


def test_hamiltonian_only() -> None:
    spec = LindbladSpec(1, LinearCombinationOfPaulis.of(1, (1.0, "Z")))
    scan = min_delta_scan(spec, 1.0, 4, 0.1)
    assert scan.delta_star == 0.0
    assert scan.delta_fail == 0.0
    assert scan.total_time == 0.0
    assert scan.total_time_fail == 0.0


def test_no_expansions(ad_spec: LindbladSpec) -> None:
    with pytest.raises(NoPassingDeltaError):
        min_delta_scan(ad_spec, 1.0, 4, 0.1, max_expansions=0)


def test_invalid(ad_spec: LindbladSpec) -> None:
    d = build_j(ad_spec)
    with pytest.raises(InvalidStagesError):
        discretization_check(d, ad_spec, 1.0, 0, 0.1, 0.1)
    with pytest.raises(ValueError, match="delta"):
        discretization_check(d, ad_spec, 1.0, 4, -0.1, 0.1)
