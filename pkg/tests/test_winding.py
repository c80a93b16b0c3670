import numpy as np
import pytest
from hypothesis import given, strategies as st

from orientham.errors import InputError
from orientham.winding import concentration_experiment, parse_path_spec, wind_paths


def prefix_clusters(start, signs, k):
    pos, out = start, [start % k]
    for c in signs:
        pos += 1 if c == "+" else -1
        out.append(pos % k)
    return out


class TestParse:
    def test_directed(self):
        assert parse_path_spec("3x4") == ["+++"] * 3

    def test_antidirected(self):
        assert parse_path_spec("2x5:anti") == ["+-+-"] * 2

    def test_random_needs_seed(self):
        with pytest.raises(InputError):
            parse_path_spec("2x5:rand")
        assert parse_path_spec("2x5:rand", seed=1) == parse_path_spec("2x5:rand", seed=1)

    def test_malformed(self):
        with pytest.raises(InputError):
            parse_path_spec("ten by ten")


class TestWindPaths:
    def test_directed_path_of_k_vertices_visits_each_cluster_once(self):
        res = wind_paths(6, ["+" * 5], seed=3)
        assert res.loads.tolist() == [1] * 6

    def test_antidirected_oscillates(self):
        res = wind_paths(5, ["+-+-+-"], seed=0)
        assert len(set(res.clusters[0].tolist())) == 2
        assert np.count_nonzero(res.loads) == 2

    def test_conservation(self):
        res = wind_paths(8, parse_path_spec("1000x10"), seed=7)
        assert res.total == 10_000

    @given(st.integers(1, 12), st.lists(st.text("+-", max_size=15), min_size=1, max_size=20), st.integers(0, 10**6))
    def test_matches_prefix_sums(self, k, paths, seed):
        res = wind_paths(k, paths, seed)
        assert res.total == sum(len(p) + 1 for p in paths)
        for signs, clusters in zip(paths, res.clusters):
            assert clusters.tolist() == prefix_clusters(int(clusters[0]), signs, k)
        counts = np.bincount(np.concatenate(res.clusters), minlength=k)
        assert counts.tolist() == res.loads.tolist()

    def test_bad_k(self):
        with pytest.raises(InputError):
            wind_paths(0, ["+"], seed=0)


class TestConcentration:
    def test_single_trial(self):
        rep = concentration_experiment(8, parse_path_spec("1000x10"), trials=1, eps=0.05, seed=1)
        assert rep.trials == 1 and rep.max_deviation.shape == (1,)
        assert rep.fraction_within in (0.0, 1.0)

    def test_long_single_path_is_reported(self):
        n, k = 400, 8
        rep = concentration_experiment(k, ["+" * (n - 1)], trials=5, eps=0.01, seed=1, max_order=None)
        # a directed path wraps evenly; an oscillating one piles into two clusters
        assert rep.max_deviation.max() == 0
        rep = concentration_experiment(k, [("+-" * n)[: n - 1]], trials=5, eps=0.01, seed=1, max_order=None)
        assert np.allclose(rep.max_deviation, n / 2 - n / k)

    def test_cap_enforced(self):
        with pytest.raises(InputError):
            concentration_experiment(8, ["+" * 99], trials=1, eps=0.05, seed=1)

    def test_reproducible(self):
        paths = parse_path_spec("200x5:rand", seed=4)
        a = concentration_experiment(8, paths, trials=20, eps=0.05, seed=9)
        b = concentration_experiment(8, paths, trials=20, eps=0.05, seed=9)
        assert np.array_equal(a.max_deviation, b.max_deviation)

    def test_mean_load_within_three_standard_errors(self):
        k, paths, trials = 6, ["++-+"] * 30, 3000
        n = 150
        seeds = np.random.default_rng(0).integers(0, 2**31, trials)
        loads = np.array([wind_paths(k, paths, int(s)).loads for s in seeds])
        mean, se = loads.mean(axis=0), loads.std(axis=0, ddof=1) / np.sqrt(trials)
        assert np.all(np.abs(mean - n / k) <= 3 * se)
