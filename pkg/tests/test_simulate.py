import math

import numpy as np
import pytest

from hyperwalk import (
    Graph,
    ValidationError,
    estimate_cover,
    estimate_radio_cover,
    estimate_speedups,
    hyperline,
    mesh2d,
    radio_from_graph,
    radio_line,
    sample_first_times,
    simulate_walk,
    single_edge,
    stationary,
)
from hyperwalk.simulate import walk_tables

from conftest import random_connected_hypergraph


def harmonic(n):
    return sum(1 / i for i in range(1, n + 1))


class TestTrajectory:
    def test_single_edge_always_same_edge(self):
        tr = simulate_walk(single_edge(4), 0, 10, seed=3)
        assert all(e == 0 for e, _ in tr.steps)

    def test_p3_first_edge_from_end(self, p3):
        for seed in range(20):
            tr = simulate_walk(p3, 0, 1, seed=seed)
            assert tr.steps[0][0] == 0  # E(a) = {e0}

    def test_deterministic(self, p3):
        a = simulate_walk(p3, 0, 50, seed=9)
        b = simulate_walk(p3, 0, 50, seed=9)
        assert a == b
        assert a != simulate_walk(p3, 0, 50, seed=10)

    def test_undirected_invariants(self):
        H = random_connected_hypergraph(8, 6, 2)
        tr = simulate_walk(H, 0, 200, seed=4)
        prev = tr.start
        for e, v in tr.steps:
            assert prev in H.edges[e]
            assert v in H.edges[e]
            prev = v

    def test_directed_invariants(self):
        R = radio_line(10, 2)
        tr = simulate_walk(R, 0, 200, seed=4)
        prev = tr.start
        for a, v in tr.steps:
            org, dst = R.arcs[a]
            assert org == (prev,)
            assert v in dst
            prev = v

    def test_occupancy_converges_to_pi(self, p3):
        pi, _ = stationary(p3)
        tr = simulate_walk(p3, 0, 100_000, seed=11)
        freq = np.bincount(tr.vertices(), minlength=3) / (len(tr.steps) + 1)
        assert np.abs(freq - pi).max() <= 0.01

    def test_occupancy_hyperline(self):
        H = hyperline(10, 3)
        pi, _ = stationary(H)
        tr = simulate_walk(H, 0, 100_000, seed=1)
        freq = np.bincount(tr.vertices(), minlength=10) / (len(tr.steps) + 1)
        assert np.abs(freq - pi).max() <= 0.01


class TestCover:
    def test_single_edge_coupon_collector(self):
        rep = estimate_cover(single_edge(4), start=0, trials=10_000, seed=5)
        exact = 4 * harmonic(3)
        assert abs(rep.mean - exact) <= max(rep.ci95, 3.5 * math.sqrt(rep.variance / rep.trials))
        assert rep.capped == 0 and rep.valid

    def test_p3_cover_from_end(self, p3):
        rep = estimate_cover(p3, start=0, trials=5000, seed=6)
        assert abs(rep.mean - 8) <= 3.5 * math.sqrt(rep.variance / rep.trials)

    def test_degenerate_single_vertex(self):
        rep = estimate_cover(single_edge(1), start=0, trials=10, seed=0)
        assert rep.mean == 0.0

    def test_tiny_cap_flags_invalid(self, p3):
        rep = estimate_cover(p3, start=0, trials=100, seed=0, cap=2)
        assert rep.capped > 1 and not rep.valid

    def test_all_policy_reports_worst_start(self, p3):
        rep = estimate_cover(p3, start="all", trials=800, seed=1)
        assert len(rep.per_start) == 3
        assert rep.mean == max(p["mean"] for p in rep.per_start)
        # covering the lazy path from the middle needs E[max(T_a, T_c)] = 10,
        # from an end only h(end, end) = 8
        means = {p["start"]: p["mean"] for p in rep.per_start}
        assert means["1"] > means["0"] and means["1"] > means["2"]

    def test_stationary_policy(self, p3):
        rep = estimate_cover(p3, start="stationary", trials=500, seed=2)
        assert rep.start == "stationary" and rep.trials == 500


class TestRadioCover:
    def test_single_edge_exactly_one(self):
        rep = estimate_radio_cover(single_edge(4), start=0, trials=2000, seed=1)
        assert rep.mean == 1.0 and rep.variance == 0.0

    def test_p3_matches_exact_five(self, p3):
        rep = estimate_radio_cover(p3, start=0, trials=10_000, seed=2)
        assert abs(rep.mean - 5) <= 3.5 * math.sqrt(rep.variance / rep.trials)

    def test_torus_bounded_below_by_max_hitting(self):
        from hyperwalk import max_radio_hitting
        R = mesh2d(5, 1)
        h_r, _ = max_radio_hitting(R)
        rep = estimate_radio_cover(R, start=0, trials=3000, seed=3)
        assert rep.mean + 3 * math.sqrt(rep.variance / rep.trials) >= h_r


class TestDeterminism:
    def test_same_seed_same_report(self, p3):
        a = estimate_radio_cover(p3, start=0, trials=400, seed=7)
        b = estimate_radio_cover(p3, start=0, trials=400, seed=7)
        assert a == b

    @pytest.mark.parametrize("workers", [4, 8])
    def test_worker_count_invariance(self, workers):
        H = hyperline(12, 3)
        base = estimate_cover(H, start="all", trials=300, seed=9, workers=1)
        other = estimate_cover(H, start="all", trials=300, seed=9, workers=workers)
        assert base == other

    def test_sample_matrix_worker_invariance(self):
        R = radio_line(16, 2)
        t1, c1 = sample_first_times(R, 0, 500, 3, mode="heard", workers=1)
        t8, c8 = sample_first_times(R, 0, 500, 3, mode="heard", workers=8)
        assert (t1 == t8).all() and (c1 == c8).all()

    def test_different_seeds_differ(self, p3):
        a = estimate_cover(p3, start=0, trials=200, seed=0)
        b = estimate_cover(p3, start=0, trials=200, seed=1)
        assert a.mean != b.mean


class TestSampleFirstTimes:
    def test_radio_heard_start_at_zero(self, p3):
        times, capped = sample_first_times(p3, 0, 50, 1, mode="heard")
        assert (times[:, 0] == 0).all()
        assert not capped.any()

    def test_matches_exact_on_p3(self, p3):
        from hyperwalk import radio_hitting
        times, _ = sample_first_times(p3, 0, 20_000, 9, mode="heard")
        exact = radio_hitting(p3, 0, [2]).value
        col = times[:, 2].astype(float)
        se = col.std(ddof=1) / math.sqrt(len(col))
        assert abs(col.mean() - exact) <= 3.5 * se

    def test_visit_mode_matches_hitting(self, p3):
        from hyperwalk import build_operators, hitting_times
        times, _ = sample_first_times(p3, 0, 20_000, 4, mode="visit")
        exact = hitting_times(build_operators(p3).P, [2]).values[0]
        col = times[:, 2].astype(float)
        se = col.std(ddof=1) / math.sqrt(len(col))
        assert abs(col.mean() - exact) <= 3.5 * se

    def test_targets_restrict_stopping(self):
        H = hyperline(20, 2)
        times, capped = sample_first_times(H, 0, 50, 2, mode="heard", targets=[3])
        assert (times[:, 3] >= 0).all()
        assert not capped.any()


class TestSpeedups:
    def test_p3_values(self, p3):
        sp = estimate_speedups(p3, trials=600, seed=0)
        assert sp.hitting_speedup == pytest.approx(8 / 5, abs=1e-9)
        assert sp.cover_speedup > 1

    def test_single_edge_tight_example(self):
        sp = estimate_speedups(single_edge(4), trials=4000, seed=1)
        assert sp.radio_cover.mean == 1.0
        expected = 4 * harmonic(3)
        assert abs(sp.cover_speedup - expected) <= 3 * sp.cover_speedup_ci95 + 0.3

    def test_walk_tables_validation(self):
        from hyperwalk import Hypergraph
        with pytest.raises(ValidationError):
            walk_tables(Hypergraph(3, [[0, 1]]))
