from fractions import Fraction

import numpy as np
import pytest

from hyperwalk import (
    Graph,
    ValidationError,
    harmonic,
    hyperline,
    instance_bound_reports,
    line1d_bound,
    line1d_check,
    line1d_step_moments,
    lower_trend,
    matthews_bound,
    mesh2d_trend,
    mnr_bound,
    radio_from_graph,
    radio_matthews_bound,
    single_edge,
    speedup_bound,
)
from hyperwalk.bounds import (
    _verdict_lower,
    _verdict_upper,
    line1d_paper_constant,
    mesh2d_identity_reports,
)


class TestClosedForms:
    def test_harmonic(self):
        assert harmonic(3) == pytest.approx(11 / 6, abs=1e-15)
        assert harmonic(1) == 1.0

    def test_matthews_p3(self):
        assert matthews_bound(8, 3) == pytest.approx(8 * 11 / 6, abs=1e-12)

    def test_radio_matthews_floor(self):
        # with h~max = 1 the bound stays above the tight example's C~ = 1
        assert radio_matthews_bound(1.0, 4) >= 1.0

    @pytest.mark.parametrize("n,m,r,expect", [
        (3, 2, 2, 24),
        (4, 1, 4, 32),
        (15, 63, 3, 5670),
    ])
    def test_mnr(self, n, m, r, expect):
        assert mnr_bound(n, m, r) == expect

    def test_speedup_bound(self):
        assert speedup_bound(4) == pytest.approx(4 * harmonic(4), abs=1e-12)

    def test_line1d_bound_formula(self):
        # (1/3)k^2 + (1/2)k + 1/6 at k=5 is exactly 11
        assert line1d_paper_constant(5) == Fraction(11)
        assert line1d_bound(200, 5) == pytest.approx(40000 / 11, abs=1e-9)
        assert line1d_bound(60, 2) == pytest.approx(3600 / 2.5, abs=1e-9)

    def test_param_validation(self):
        with pytest.raises(ValidationError):
            matthews_bound(1.0, 1)
        with pytest.raises(ValidationError):
            mnr_bound(0, 1, 1)
        with pytest.raises(ValidationError):
            line1d_bound(10, 1)


class TestStepMoments:
    @pytest.mark.parametrize("k", range(1, 11))
    def test_radio_matches_constant_exactly(self, k):
        drift, var = line1d_step_moments(k, "radio")
        assert drift == 0
        assert var == line1d_paper_constant(k)

    @pytest.mark.parametrize("k", range(2, 11))
    def test_hyperline_contradicts_constant(self, k):
        drift, var = line1d_step_moments(k, "hyperline")
        assert drift == 0
        assert var == Fraction(k * k - 1, 6)
        assert var != line1d_paper_constant(k)

    def test_k2_hand_values(self):
        assert line1d_step_moments(2, "radio")[1] == Fraction(5, 2)
        assert line1d_step_moments(2, "hyperline")[1] == Fraction(1, 2)

    def test_unknown_model(self):
        with pytest.raises(ValidationError):
            line1d_step_moments(2, "nope")


class TestVerdicts:
    def test_upper(self):
        assert _verdict_upper(5, 0.1, 10) == "holds"
        assert _verdict_upper(11, 0.5, 10) == "violated"
        assert _verdict_upper(10.2, 0.5, 10) == "inconclusive(CI)"

    def test_lower(self):
        assert _verdict_lower(10, 0.1, 5) == "holds"
        assert _verdict_lower(4, 0.5, 5) == "violated"
        assert _verdict_lower(4.8, 0.5, 5) == "inconclusive(CI)"


class TestInstanceReports:
    def test_p3_all_hold(self, p3):
        reports = instance_bound_reports(p3, trials=800, seed=0, label="P3")
        assert {r.name for r in reports} == {"matthews", "radio-matthews", "mnr",
                                             "speedup", "ch2"}
        assert all(r.verdict == "holds" for r in reports)

    def test_single_edge_speedup_tight(self):
        reports = instance_bound_reports(single_edge(4), checks=("speedup",),
                                         trials=3000, seed=1)
        (rep,) = reports
        # measured speedup ~ 4 H_3 = 7.33 stays below the 4 H_4 = 8.33 envelope
        assert rep.verdict == "holds"
        assert rep.measured == pytest.approx(4 * harmonic(3), rel=0.05)

    def test_radio_instance_ch2(self):
        R = radio_from_graph(Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
        (rep,) = instance_bound_reports(R, checks=("ch2",), trials=1500, seed=2)
        assert rep.verdict == "holds"

    def test_unknown_check_rejected(self, p3):
        with pytest.raises(ValidationError, match="unknown bound check"):
            instance_bound_reports(p3, checks=("nope",))


class TestLine1dSuite:
    def test_small_ring(self):
        tr = line1d_check(60, 2, trials=400, seed=0)
        by_name = {c.name: c for c in tr.checks}
        assert by_name["line1d-step-variance"].verdict == "holds"
        assert by_name["line1d-ring-cover"].verdict == "holds"
        assert by_name["line1d-hyperline-variance"].verdict == "flagged"


class TestMesh2dTrend:
    def test_side7_decreasing(self):
        tr = mesh2d_trend(7, [1, 2, 3], trials=150, seed=0, pairs=10)
        rows = {r["k"]: r for r in tr.rows}
        assert rows[3]["h_radio_max"] < rows[2]["h_radio_max"] < rows[1]["h_radio_max"]
        assert all(c.verdict == "holds" for c in tr.checks)

    def test_rwv_on_small_torus(self):
        tr = mesh2d_trend(5, [1], trials=50, seed=3, pairs=20)
        rwv = [c for c in tr.checks if c.name == "mesh2d-rwv"][0]
        assert rwv.verdict == "holds" and rwv.measured >= 2 / 5

    @pytest.mark.parametrize("side", [4, 5])
    def test_identities(self, side):
        reports = mesh2d_identity_reports(side, 1)
        assert all(r.verdict == "holds" for r in reports)
        assert all(r.measured <= 1e-7 for r in reports)


class TestLowerTrend:
    def test_growth(self):
        tr = lower_trend([4, 6, 8], [2, 3])
        (chk,) = tr.checks
        assert chk.verdict == "holds"
        assert chk.measured > 0.9  # log-log slope near linear in m*n*c

    def test_rows_carry_both_directions(self):
        tr = lower_trend([4, 6], [2])
        for row in tr.rows:
            assert row["h_radio"] > row["h_radio_reverse"]
