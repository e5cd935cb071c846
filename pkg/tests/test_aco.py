"""Ant-colony search tests: selection statistics, cost oracle, pheromone
arithmetic, search termination, k-means baseline, and the comparison harness."""

import itertools

import numpy as np
import pytest

from acorbfn import aco, rbfn

CHI2_CRIT_3DOF_999 = 16.266  # chi-square 0.999 quantile, 3 degrees of freedom


def tiny_blobs(rng, n_per=4, k=3, sigma=0.3, sep=10.0):
    mus = np.array([[0.0, 0.0], [sep, 0.0], [0.0, sep]])[:k]
    return np.vstack([mu + sigma * rng.standard_normal((n_per, 2)) for mu in mus])


class TestInitAndSelect:
    def test_init_uniform(self):
        state = aco.init_pheromone(3, 1.0)
        assert np.array_equal(state.trails, np.ones((3, 3)))
        assert state.iteration == 0

    def test_init_rows_normalize(self):
        state = aco.init_pheromone(5, 2.5)
        p = state.trails[0] / state.trails[0].sum()
        assert abs(p.sum() - 1.0) < 1e-15
        assert np.allclose(p, 0.2)

    def test_tiny_initial_level_ok(self):
        state = aco.init_pheromone(2, 1e-9)
        assert np.all(state.trails > 0)

    def test_uniform_four_way_chi_square(self):
        state = aco.init_pheromone(4, 1.0)
        rng = np.random.default_rng(3)
        counts = np.zeros(4)
        n = 100_000
        for _ in range(n):
            counts[aco.select_next(state, 0, set(), rng)] += 1
        expected = n / 4.0
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        assert chi2 < CHI2_CRIT_3DOF_999

    def test_single_admissible(self):
        state = aco.init_pheromone(4, 1.0)
        rng = np.random.default_rng(0)
        for _ in range(50):
            assert aco.select_next(state, 0, {0, 1, 3}, rng) == 2

    def test_three_to_one_ratio(self):
        trails = np.array([[1.0, 3.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]])
        state = aco.PheromoneState(trails)
        rng = np.random.default_rng(11)
        n = 100_000
        hits = sum(aco.select_next(state, 0, {0}, rng) == 1 for _ in range(n))
        assert abs(hits / n - 0.75) < 0.01

    def test_no_admissible_vertex(self):
        state = aco.init_pheromone(3, 1.0)
        with pytest.raises(aco.NoAdmissibleVertex):
            aco.select_next(state, 0, {0, 1, 2}, np.random.default_rng(0))


class TestCostAndConstruction:
    def test_cost_zero_when_centers_cover(self, rng):
        data = rng.uniform(-1, 1, (10, 2))
        assert aco.solution_cost(data, data) == 0.0

    def test_cost_two_points_one_center(self):
        assert aco.solution_cost(np.array([[1.0]]), np.array([[0.0], [2.0]])) == 2.0

    def test_cost_brute_force_oracle(self, rng):
        data = rng.uniform(-5, 5, (20, 3))
        centers = rng.uniform(-5, 5, (3, 3))
        expected = 0.0
        for p in data:
            expected += min(float(np.sqrt(((p - c) ** 2).sum())) for c in centers)
        assert abs(aco.solution_cost(centers, data) - expected) < 1e-12

    def test_full_permutation(self, rng):
        data = rng.uniform(-1, 1, (6, 2))
        state = aco.init_pheromone(6, 1.0)
        sol = aco.construct_solution(state, data, 6, np.random.default_rng(5))
        assert sorted(sol.chosen_vertices) == list(range(6))

    def test_single_vertex_solution(self, rng):
        data = rng.uniform(-1, 1, (5, 2))
        state = aco.init_pheromone(5, 1.0)
        sol = aco.construct_solution(state, data, 1, np.random.default_rng(4))
        v = sol.chosen_vertices[0]
        expected = sum(float(np.linalg.norm(p - data[v])) for p in data)
        assert abs(sol.cost - expected) < 1e-12

    def test_no_repeats(self, rng):
        data = rng.uniform(-1, 1, (8, 2))
        state = aco.init_pheromone(8, 1.0)
        for seed in range(20):
            sol = aco.construct_solution(state, data, 5, np.random.default_rng(seed))
            assert len(set(sol.chosen_vertices)) == 5


class TestPheromoneUpdate:
    def test_single_ant_arithmetic(self):
        state = aco.init_pheromone(3, 1.0)
        sol = aco.AntSolution((0, 1), 50.0)
        new = aco.update_pheromone(state, [sol], 0.9, 100.0)
        assert abs(new.trails[0, 1] - 1.9) < 1e-12  # 0.1*1 + 0.9*(100/50)
        assert new.iteration == 1

    def test_pure_evaporation_off_path(self):
        state = aco.init_pheromone(3, 1.0)
        new = aco.update_pheromone(state, [aco.AntSolution((0, 1), 50.0)], 0.9, 100.0)
        assert abs(new.trails[1, 2] - 0.1) < 1e-15
        assert abs(new.trails[1, 0] - 0.1) < 1e-15

    def test_two_ants_same_edge(self):
        state = aco.init_pheromone(3, 1.0)
        sols = [aco.AntSolution((0, 1), 50.0), aco.AntSolution((0, 1), 100.0)]
        new = aco.update_pheromone(state, sols, 0.9, 100.0)
        # deposits 2 + 1 on the edge: 0.1*1 + 0.9*3
        assert abs(new.trails[0, 1] - 2.8) < 1e-12

    def test_zero_cost_raises(self):
        state = aco.init_pheromone(3, 1.0)
        with pytest.raises(aco.ZeroCostSolution):
            aco.update_pheromone(state, [aco.AntSolution((0, 1), 0.0)], 0.9, 100.0)

    def test_positivity_preserved(self, rng):
        for it in range(100):
            state = aco.init_pheromone(5, rng.uniform(0.1, 2.0))
            for step in range(10):
                path = tuple(rng.permutation(5)[:3])
                sols = [aco.AntSolution(path, rng.uniform(1.0, 100.0))]
                state = aco.update_pheromone(state, sols, 0.9, 100.0)
            assert state.trails.min() > 0.0


class TestRunAco:
    def test_distinct_points_reach_zero(self, rng):
        data = rng.uniform(-5, 5, (4, 2))
        cfg = aco.AcoConfig(centers_to_pick=4, max_iterations=50, rng_seed=0)
        res = aco.run_aco_centers(data, cfg)
        assert res.best_cost == 0.0
        assert res.iterations_used < 50
        assert sorted(res.best_indices) == [0, 1, 2, 3]

    def test_single_iteration_budget(self, rng):
        data = rng.uniform(-5, 5, (10, 2))
        cfg = aco.AcoConfig(centers_to_pick=3, max_iterations=1, rng_seed=0)
        res = aco.run_aco_centers(data, cfg)
        assert res.iterations_used == 1
        assert len(res.best_cost_history) == 1

    def test_best_so_far_monotone(self, rng):
        data = tiny_blobs(rng, n_per=6)
        cfg = aco.AcoConfig(centers_to_pick=3, max_iterations=30, rng_seed=2)
        res = aco.run_aco_centers(data, cfg)
        hist = res.best_cost_history
        assert all(b <= a + 1e-15 for a, b in zip(hist, hist[1:]))

    def test_deterministic(self, rng):
        data = tiny_blobs(rng, n_per=5)
        cfg = aco.AcoConfig(centers_to_pick=3, max_iterations=20, rng_seed=9)
        r1 = aco.run_aco_centers(data, cfg)
        r2 = aco.run_aco_centers(data, cfg)
        assert np.array_equal(r1.centers, r2.centers)
        assert r1.best_cost == r2.best_cost
        assert r1.iterations_used == r2.iterations_used
        assert r1.best_cost_history == r2.best_cost_history

    def test_scaling_equivariance(self, rng):
        data = tiny_blobs(rng, n_per=4)
        cfg = aco.AcoConfig(centers_to_pick=3, max_iterations=15, rng_seed=3)
        res1 = aco.run_aco_centers(data, cfg)
        s = 7.5
        res2 = aco.run_aco_centers(s * data, cfg)
        assert res2.best_indices == res1.best_indices
        assert abs(res2.best_cost - s * res1.best_cost) < 1e-9 * max(1.0, res1.best_cost)

    def test_scaling_leaves_exhaustive_argmin(self, rng):
        data = tiny_blobs(rng, n_per=4)

        def argmin_subset(points):
            best, best_cost = None, np.inf
            for combo in itertools.combinations(range(len(points)), 3):
                c = aco.solution_cost(points[list(combo)], points)
                if c < best_cost:
                    best, best_cost = combo, c
            return best

        assert argmin_subset(data) == argmin_subset(4.0 * data)

    def test_k_larger_than_dataset_rejected(self, rng):
        with pytest.raises(ValueError):
            aco.run_aco_centers(rng.uniform(-1, 1, (3, 2)), aco.AcoConfig(centers_to_pick=5))


class TestKmeans:
    def test_two_cluster_line(self):
        data = np.array([[0.0], [1.0], [9.0], [10.0]])
        res = aco.kmeans_centers(data, 2, rng_seed=0)
        got = sorted(res.centers.ravel().tolist())
        assert np.allclose(got, [0.5, 9.5], atol=1e-12)

    def test_k_equals_n_zero_cost(self, rng):
        data = rng.uniform(-3, 3, (6, 2))
        res = aco.kmeans_centers(data, 6, rng_seed=1)
        assert res.cost < 1e-12

    def test_wcss_monotone_ten_datasets(self):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            data = rng.uniform(-5, 5, (40, 3))
            res = aco.kmeans_centers(data, 4, rng_seed=seed)
            hist = res.wcss_history
            assert all(b <= a + 1e-9 for a, b in zip(hist, hist[1:]))

    def test_empty_cluster_reseeded(self):
        # duplicated points force a tie: both initial centers can coincide,
        # leaving one cluster empty until the reseed kicks in
        data = np.array([[0.0], [0.0], [10.0], [11.0]])
        seed = next(
            s for s in range(100)
            if set(np.random.default_rng(s % 2**32).choice(4, size=2, replace=False)) == {0, 1}
        )
        res = aco.kmeans_centers(data, 2, rng_seed=seed)
        got = sorted(res.centers.ravel().tolist())
        assert np.allclose(got, [0.0, 10.5], atol=1e-12)

    def test_deterministic(self, rng):
        data = rng.uniform(-5, 5, (30, 2))
        r1 = aco.kmeans_centers(data, 3, rng_seed=4)
        r2 = aco.kmeans_centers(data, 3, rng_seed=4)
        assert np.array_equal(r1.centers, r2.centers)
        assert r1.cost == r2.cost and r1.iterations == r2.iterations


class TestComparison:
    def test_row_count_and_schema(self, rng):
        data, targets = aco.make_blob_benchmark(n_points=60, rng_seed=0)
        cfg = aco.AcoConfig(centers_to_pick=5, max_iterations=10, rng_seed=0)
        tcfg = rbfn.TrainConfig(learning_rate=0.1, error_target=1e-9, max_hidden=5, max_epochs=5)
        report = aco.compare_clustering(data, 5, cfg, 3, targets, tcfg)
        assert len(report.rows) == 3
        csv = aco.comparison_csv(report)
        lines = csv.strip().splitlines()
        assert lines[0] == "seed,aco_cost,kmeans_cost,aco_final_E,kmeans_final_E,aco_iters,kmeans_iters"
        assert len(lines) == 4

    def test_identical_centers_identical_error(self, rng):
        data, targets = aco.make_blob_benchmark(n_points=50, rng_seed=1)
        centers = data[:5]
        tcfg = rbfn.TrainConfig(learning_rate=0.1, error_target=1e-9, max_hidden=5,
                                max_epochs=8, rng_seed=3)
        e1, _ = aco._fit_error(centers, data, targets, tcfg)
        e2, _ = aco._fit_error(centers, data, targets, tcfg)
        assert e1 == e2

    def test_nonloss_rate_definition(self, rng):
        data, targets = aco.make_blob_benchmark(n_points=60, rng_seed=2)
        cfg = aco.AcoConfig(centers_to_pick=5, max_iterations=10, rng_seed=0)
        tcfg = rbfn.TrainConfig(learning_rate=0.1, error_target=1e-9, max_hidden=5, max_epochs=5)
        report = aco.compare_clustering(data, 5, cfg, 4, targets, tcfg)
        manual = np.mean([r.aco_final_e <= r.kmeans_final_e for r in report.rows])
        assert report.aco_nonloss_rate == manual

    def test_blob_benchmark_shape(self):
        pts, targets = aco.make_blob_benchmark(n_points=301, n_blobs=5, blob_sigma=0.5,
                                               separation=8.0, rng_seed=5)
        assert pts.shape == (301, 3) and targets.shape == (301, 1)
        assert np.allclose(targets[:, 0], np.sin(pts).sum(axis=1), atol=1e-12)
        # blob layout honors the minimum separation
        layout = aco._BLOB_LAYOUT * 8.0
        gaps = [np.linalg.norm(a - b) for a, b in itertools.combinations(layout, 2)]
        assert min(gaps) >= 8.0
