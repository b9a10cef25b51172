from __future__ import annotations

import math

from lindblad2lcu.commands._common import check_slope
from lindblad2lcu.report import Column
from lindblad2lcu.report import Report
import pytest


def _report() -> Report:
    return Report("test", (Column("x", "x"),))


def test_records_slope() -> None:
    report = _report()
    slope = check_slope(
        report, "slope", [(1.0, 1.0), (2.0, 4.0), (4.0, 16.0)], low=1.9, high=2.1
    )
    assert slope == pytest.approx(2.0)
    assert report.summary["slope"] == pytest.approx(2.0)
    assert report.passed


def test_out_of_range() -> None:
    report = _report()
    check_slope(report, "slope", [(1.0, 1.0), (2.0, 2.0), (4.0, 4.0)], low=0, high=0.5)
    assert not report.passed


@pytest.mark.parametrize(
    "points",
    [
        [(1.0, 1.0), (2.0, 2.0)],
        [(1.0, 1.0), (1.0, 2.0), (2.0, 4.0)],
        [(1.0, 1.0), (2.0, 0.0), (4.0, 4.0)],
    ],
)
def test_cannot_fit(points: list[tuple[float, float]]) -> None:
    report = _report()
    assert math.isnan(check_slope(report, "slope", points, low=0, high=2))
    assert not report.passed
    assert "slope" not in report.summary
