"""Tests for the verification suites."""

import pytest

from src.validator.validator import (
    CheckResult,
    check_halfcircle_j0,
    check_hankel_derivative,
    check_hk_trend,
    format_report,
    run_checks,
)


class TestIndividualChecks:
    def test_hankel_derivative(self):
        assert check_hankel_derivative() < 1e-6

    def test_halfcircle_j0(self):
        assert check_halfcircle_j0() < 1e-8

    def test_hk_trend_decreases(self):
        assert check_hk_trend((25.0, 100.0)) < 1.0


class TestRunChecks:
    def test_fast_level_passes(self):
        results = run_checks("fast")
        assert len(results) == 7
        failed = [r.name for r in results if not r.passed]
        assert not failed, format_report(results)

    def test_unknown_level(self):
        with pytest.raises(ValueError):
            run_checks("medium")


class TestReport:
    def test_format(self):
        report = format_report([
            CheckResult("hankel_derivative", 1e-9, 1e-6, True),
            CheckResult("reciprocity_dirichlet", 0.2, 1e-2, False),
        ])
        assert "hankel_derivative" in report
        assert "FAIL" in report
        assert "1/2 checks passed" in report
