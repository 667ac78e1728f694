import logging
import math

import numpy as np
import pytest

from deseed.entities.benchmark import BenchmarkId, evaluate, get_spec, in_bounds
from deseed.seeder import (
    CandidateBranch, SeedPool, analytic_seed_pool, materialize, numeric_perturbation_roots,
    numeric_seed_pool, separable_terms
)

QUAD = CandidateBranch.QUADRATIC_TERM
TRIG = CandidateBranch.TRIG_TERM


class TestAnalyticSeedPool:

    def test_sphere(self):
        pool = analytic_seed_pool(BenchmarkId.SPHERE, 0.2)

        assert len(pool.per_dimension_candidates) == 30
        for candidates in pool.per_dimension_candidates:
            assert [(c.value, c.branch) for c in candidates] == [(0.1, QUAD)]
        assert pool.whole_point_seeds == []

    def test_sphere_eps_zero(self):
        pool = analytic_seed_pool(BenchmarkId.SPHERE, 0.0)
        for candidates in pool.per_dimension_candidates:
            assert [c.value for c in candidates] == [0.0]

    def test_axis_parallel(self):
        pool = analytic_seed_pool(BenchmarkId.AXIS_PARALLEL, 0.0)
        assert len(pool.per_dimension_candidates) == 30
        assert all(len(c) == 1 for c in pool.per_dimension_candidates)

    def test_rastrigin(self):
        pool = analytic_seed_pool(BenchmarkId.RASTRIGIN, 0.0)

        assert len(pool.per_dimension_candidates) == 10
        for candidates in pool.per_dimension_candidates:
            assert len(candidates) == 42
            assert candidates[0].value == 0.0 and candidates[0].branch is QUAD

            trig = sorted(c.value for c in candidates if c.branch is TRIG)
            assert len(trig) == 41
            assert trig == pytest.approx([k / 4 for k in range(-20, 21)], abs=1e-12)

    def test_rastrigin_eps_shift(self):
        eps = 0.01
        pool = analytic_seed_pool(BenchmarkId.RASTRIGIN, eps)
        trig = [c.value for c in pool.per_dimension_candidates[0] if c.branch is TRIG]

        assert min(abs(v - eps / (4 * math.pi)) for v in trig) < 1e-12

    def test_michalewicz(self):
        pool = analytic_seed_pool(BenchmarkId.MICHALEWICZ, 0.0)

        assert len(pool.per_dimension_candidates) == 5
        for candidates in pool.per_dimension_candidates:
            assert len(candidates) == 1
            assert candidates[0].value == pytest.approx(math.pi / 2)
            assert candidates[0].branch is TRIG

    def test_matyas(self):
        pool = analytic_seed_pool(BenchmarkId.MATYAS, 0.0)
        assert [s.point for s in pool.whole_point_seeds] == [(0.0, 0.0)]
        assert pool.per_dimension_candidates == []

    @pytest.mark.parametrize("eps", [0.0, 0.1, 1.0])
    def test_rosenbrock(self, eps):
        pool = analytic_seed_pool(BenchmarkId.ROSENBROCK, eps)
        assert [s.point for s in pool.whole_point_seeds] == [(1.0,) * 30]

    def test_branin(self):
        pool = analytic_seed_pool(BenchmarkId.BRANIN, 0.0)

        trig_seeds = [s.point for s in pool.whole_point_seeds if s.branch is TRIG]
        x1s = [p[0] for p in trig_seeds]
        assert x1s == pytest.approx([-math.pi, 0.0, math.pi, 2 * math.pi, 3 * math.pi])

        # quadratic-branch seed ranks first
        assert pool.whole_point_seeds[0].branch is QUAD

        for point in (trig_seeds[0], trig_seeds[2], trig_seeds[4]):
            assert evaluate(BenchmarkId.BRANIN, point) == pytest.approx(0.3979, abs=1e-4)

    @pytest.mark.parametrize("id", list(BenchmarkId))
    @pytest.mark.parametrize("eps", [0.0, 0.05, 0.5])
    def test_candidates_in_bounds(self, id, eps):
        spec = get_spec(id)
        pool = analytic_seed_pool(id, eps)

        for (lo, hi), candidates in zip(spec.bounds, pool.per_dimension_candidates):
            assert all(lo <= c.value <= hi for c in candidates)
        for seed in pool.whole_point_seeds:
            assert in_bounds(spec, seed.point)

    def test_out_of_bounds_candidates_dropped(self):
        # eps/2 = 6 lies outside (-5.12, 5.12)
        pool = analytic_seed_pool(BenchmarkId.SPHERE, 12.0)
        assert pool.is_empty()

    def test_negative_eps(self):
        with pytest.raises(ValueError):
            analytic_seed_pool(BenchmarkId.SPHERE, -1.0)

    def test_deterministic(self):
        a = analytic_seed_pool(BenchmarkId.RASTRIGIN, 0.0)
        b = analytic_seed_pool(BenchmarkId.RASTRIGIN, 0.0)
        assert a.to_dict() == b.to_dict()

    @pytest.mark.parametrize("id", [
        BenchmarkId.SPHERE, BenchmarkId.AXIS_PARALLEL, BenchmarkId.RASTRIGIN,
        BenchmarkId.ROSENBROCK, BenchmarkId.MATYAS
    ])
    def test_pool_hits_optimum(self, id):
        points = materialize(analytic_seed_pool(id, 0.0), 100, np.random.default_rng(0))
        best = min(evaluate(id, x) for x in points)
        assert abs(best - get_spec(id).optimum_value) <= 1e-12

    def test_branin_pool_hits_optimum(self):
        points = materialize(analytic_seed_pool(BenchmarkId.BRANIN, 0.0), 100, np.random.default_rng(0))
        best = min(evaluate(BenchmarkId.BRANIN, x) for x in points)
        assert best <= 0.3979 + 1e-3
        assert best == pytest.approx(0.3979, abs=1e-4)


class TestNumericPerturbationRoots:

    def test_quadratic(self):
        eps = 1e-6
        roots = numeric_perturbation_roots(lambda x: x ** 2, -5.12, 5.12, eps, 10001)

        assert len(roots) == 1
        assert abs(roots[0] - (-eps / 2)) <= 1e-9

    def test_cosine(self):
        eps = 1e-3

        def f(x):
            return math.cos(2 * math.pi * x)

        roots = numeric_perturbation_roots(f, -1.0, 1.0, eps, 10001)

        for r in roots:
            assert abs(f(r + eps) - f(r)) <= 1e-9

        # zero set of cos(2 pi (x + eps)) - cos(2 pi x) is x = k/2 - eps/2
        assert roots == pytest.approx([k / 2 - eps / 2 for k in (-1, 0, 1, 2)], abs=1e-6)

        # brute-force scan with linear interpolation inside each sign change
        grid = np.linspace(-1.0, 1.0, 10 ** 6)
        diff = np.cos(2 * np.pi * (grid + eps)) - np.cos(2 * np.pi * grid)
        idx = np.nonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0)[0]
        scanned = grid[idx] - diff[idx] * (grid[idx + 1] - grid[idx]) / (diff[idx + 1] - diff[idx])

        assert len(scanned) == len(roots)
        for r, s in zip(roots, scanned):
            assert abs(r - s) <= 1e-6

    def test_constant_function(self, caplog):
        with caplog.at_level(logging.WARNING, logger="deseed.seeder"):
            roots = numeric_perturbation_roots(lambda x: 3.0, -1.0, 1.0, 1e-3, 101)

        assert roots == []
        assert any("vanishes" in record.message for record in caplog.records)

    def test_non_finite_brackets_skipped(self, caplog):
        def f(x):
            return math.inf if x > 0.5 else x ** 2

        with caplog.at_level(logging.WARNING, logger="deseed.seeder"):
            roots = numeric_perturbation_roots(f, -1.0, 1.0, 1e-6, 1001)

        assert roots == pytest.approx([-5e-7], abs=1e-9)
        assert any("non-finite" in record.message for record in caplog.records)

    @pytest.mark.parametrize("kwargs", [
        {"eps": 0.0},
        {"grid_points": 1},
        {"lo": 1.0, "hi": 1.0},
    ])
    def test_invalid_arguments(self, kwargs):
        args = {"lo": -1.0, "hi": 1.0, "eps": 1e-3, "grid_points": 11}
        args.update(kwargs)

        with pytest.raises(ValueError):
            numeric_perturbation_roots(lambda x: x ** 2, **args)


class TestNumericSeedPool:

    @pytest.mark.parametrize("id", [
        BenchmarkId.SPHERE, BenchmarkId.AXIS_PARALLEL, BenchmarkId.RASTRIGIN, BenchmarkId.MICHALEWICZ
    ])
    def test_matches_analytic_forms(self, id):
        eps = 1e-6
        numeric = numeric_seed_pool(id, eps)
        analytic = analytic_seed_pool(id, eps)

        branch = TRIG if id is BenchmarkId.MICHALEWICZ else QUAD

        for num, ana in zip(numeric.per_dimension_candidates, analytic.per_dimension_candidates):
            num_values = [c.value for c in num if c.branch is branch]

            for candidate in ana:
                if candidate.branch is not branch:
                    continue
                # numeric roots sit at -eps/2 where the closed forms sit at +eps/2
                assert min(abs(v - (candidate.value - eps)) for v in num_values) <= 1e-6

    def test_rastrigin_cosine_roots(self):
        pool = numeric_seed_pool(BenchmarkId.RASTRIGIN)
        trig = [c.value for c in pool.per_dimension_candidates[0] if c.branch is TRIG]
        assert trig == pytest.approx([k / 2 - 5e-7 for k in range(-10, 11)], abs=1e-6)

    @pytest.mark.parametrize("id", [BenchmarkId.ROSENBROCK, BenchmarkId.BRANIN, BenchmarkId.MATYAS])
    def test_coupled_benchmarks_rejected(self, id):
        with pytest.raises(ValueError, match="not dimension-separable"):
            separable_terms(id)


class TestMaterialize:

    @pytest.fixture
    def rng(self):
        return np.random.default_rng(12345)

    def test_sphere(self, rng):
        points = materialize(analytic_seed_pool(BenchmarkId.SPHERE, 0.0), 100, rng)

        assert points.shape == (100, 30)
        assert np.all(points[0] == 0.0)
        assert np.all(np.abs(points[1:]) < 0.1)
        assert not np.any(np.all(points[1:] == 0.0, axis=1))

    def test_rastrigin(self, rng):
        pool = analytic_seed_pool(BenchmarkId.RASTRIGIN, 0.0)
        points = materialize(pool, 100, rng)

        assert points.shape == (100, 10)
        assert np.all(points[0] == 0.0)

        allowed = [{c.value for c in candidates} for candidates in pool.per_dimension_candidates]
        for point in points:
            assert all(v in values for v, values in zip(point, allowed))

    def test_matyas(self, rng):
        points = materialize(analytic_seed_pool(BenchmarkId.MATYAS, 0.0), 5, rng)

        assert points.shape == (5, 2)
        assert np.all(points[0] == 0.0)
        assert np.all(np.abs(points[1:]) < 0.2)

    def test_michalewicz(self, rng):
        points = materialize(analytic_seed_pool(BenchmarkId.MICHALEWICZ, 0.0), 100, rng)

        assert np.allclose(points[0], math.pi / 2)
        assert np.all(np.abs(points - math.pi / 2) < 0.05)

    @pytest.mark.parametrize("id", list(BenchmarkId))
    def test_in_bounds(self, id, rng):
        spec = get_spec(id)
        points = materialize(analytic_seed_pool(id, 0.0), 100, rng)

        assert points.shape == (100, spec.dimension)
        assert all(in_bounds(spec, x) for x in points)

    def test_deterministic(self):
        pool = analytic_seed_pool(BenchmarkId.RASTRIGIN, 0.0)
        a = materialize(pool, 50, np.random.default_rng(7))
        b = materialize(pool, 50, np.random.default_rng(7))
        assert np.array_equal(a, b)

    def test_truncates_to_count(self, rng):
        points = materialize(analytic_seed_pool(BenchmarkId.BRANIN, 0.0), 2, rng)
        assert points.shape == (2, 2)

    def test_empty_pool(self, rng):
        with pytest.raises(ValueError, match="empty"):
            materialize(SeedPool(BenchmarkId.SPHERE, 0.0), 10, rng)
