import math
from fractions import Fraction

import pytest

from app.errors import DomainError
from app.monitoring.convergence import (
    ConvergenceMonitor,
    convergence_table,
    error_decreasing,
    r_for,
)
from app.schemas import ConvergenceRow
from app.services.asymptotics import sigma


def make_row(s, error):
    return ConvergenceRow(
        s=s, r=s, neg_log_T_over_s2=error, sigma_limit=0.0, abs_error=error,
        route="exact", precision_bits=0,
    )


class TestRayGeometry:
    """r along the ray omega = s/(r+s)."""

    def test_r_for(self):
        assert r_for(Fraction(1, 2), 10) == 10
        assert r_for(Fraction(3, 10), 1) == 3
        assert r_for(Fraction(4, 5), 32) == 8
        assert r_for(Fraction(99, 100), 1) == 1


class TestConvergenceMonitor:
    """Finite-size estimates of sigma."""

    def test_first_row(self):
        row = ConvergenceMonitor("1/2", "3/10").row(1)
        assert row.r == 3
        assert row.route == "exact"
        assert row.precision_bits == 0
        assert row.neg_log_T_over_s2 == pytest.approx(-math.log(1 - 0.5**3))
        assert row.sigma_limit == sigma(0.3, 0.5)
        assert row.flag == ""

    def test_float_decimal_input(self):
        row = ConvergenceMonitor(0.5, 0.3).row(1)
        assert row.r == 3

    def test_subcritical_rate_vanishes(self):
        rows = convergence_table("1/4", "3/10", [1, 8])
        assert rows[0].sigma_limit == 0.0
        assert rows[1].abs_error < rows[0].abs_error

    def test_table_keeps_order(self):
        rows = convergence_table("1/2", "1/2", [3, 1, 2], threads=2)
        assert [row.s for row in rows] == [3, 1, 2]

    def test_worker_processes_match_serial(self):
        s_list = [4, 1, 3, 2]
        serial = convergence_table("1/2", "4/5", s_list, threads=1)
        assert convergence_table("1/2", "4/5", s_list, threads=2) == serial

    def test_auto_route_switches(self, monkeypatch):
        monkeypatch.setenv("PENTATILE_EXACT_MAX_S", "2")
        rows = convergence_table("1/2", "4/5", [2, 3], precision=128)
        assert [row.route for row in rows] == ["exact", "float"]
        assert rows[1].precision_bits == 128

    def test_float_route_matches_exact(self):
        exact = ConvergenceMonitor("1/2", "4/5", route="exact").row(16)
        floating = ConvergenceMonitor("1/2", "4/5", precision=512, route="float").row(16)
        assert floating.flag == ""
        assert floating.neg_log_T_over_s2 == pytest.approx(exact.neg_log_T_over_s2, rel=1e-9)

    @pytest.mark.slow
    def test_supercritical_error_shrinks(self):
        rows = convergence_table("1/2", "4/5", [8, 16, 32], route="exact")
        assert rows[0].sigma_limit > 0
        assert rows[2].abs_error < rows[0].abs_error

    @pytest.mark.slow
    def test_float_route_large_s(self):
        rows = convergence_table("1/2", "4/5", [16, 32, 64], precision=512, route="float")
        for row in rows:
            assert row.route == "float"
            assert row.precision_bits == 512
            assert row.flag == ""
            assert math.isfinite(row.neg_log_T_over_s2)
        assert error_decreasing(rows)
        assert rows[-1].abs_error < 0.013

    def test_domain(self):
        with pytest.raises(DomainError):
            ConvergenceMonitor("1/2", "1")
        with pytest.raises(DomainError):
            ConvergenceMonitor("3/2", "1/2")
        with pytest.raises(DomainError):
            ConvergenceMonitor("1/2", "1/2", route="fast")
        with pytest.raises(DomainError):
            ConvergenceMonitor("1/2", "1/2").row(0)


class TestErrorTrend:
    """Strictly decreasing error check."""

    def test_decreasing(self):
        assert error_decreasing([make_row(1, 0.3), make_row(2, 0.2), make_row(4, 0.1)])

    def test_sorted_by_s(self):
        assert error_decreasing([make_row(4, 0.1), make_row(1, 0.3), make_row(2, 0.2)])

    def test_plateau_fails(self):
        assert not error_decreasing([make_row(1, 0.3), make_row(2, 0.3)])


@pytest.mark.slow
class TestFiniteSizeTrends:
    """Desk-scale finite-size scaling runs."""

    def test_subcritical_estimates_fall_toward_zero(self):
        rows = convergence_table("1/4", "3/10", [8, 16, 32])
        estimates = [row.neg_log_T_over_s2 for row in rows]
        assert all(later < earlier for earlier, later in zip(estimates, estimates[1:]))
        assert all(row.sigma_limit == 0.0 for row in rows)
