import math

import numpy as np
import pytest

from deseed.entities.benchmark import BenchmarkId, evaluate, get_spec, in_bounds
from deseed.entities.population import InitStrategy, StrategyKind, init_population

STRATEGIES = [InitStrategy.random(), InitStrategy.selected(), InitStrategy.semi_random(0.5)]


class TestInitStrategy:

    @pytest.mark.parametrize("text, kind, fraction", [
        ("random", StrategyKind.RANDOM, 0.5),
        ("selected", StrategyKind.SELECTED, 0.5),
        ("semi", StrategyKind.SEMI_RANDOM, 0.5),
        ("semi:0.25", StrategyKind.SEMI_RANDOM, 0.25),
        (" Selected ", StrategyKind.SELECTED, 0.5),
    ])
    def test_parse(self, text, kind, fraction):
        strategy = InitStrategy.parse(text)
        assert strategy.kind is kind
        assert strategy.selected_fraction == fraction

    @pytest.mark.parametrize("text", ["semi:1.5", "semi:-0.1", "semi:abc", "opposition", ""])
    def test_parse_invalid(self, text):
        with pytest.raises(ValueError):
            InitStrategy.parse(text)

    def test_name(self):
        assert InitStrategy.random().name == "random"
        assert InitStrategy.selected().name == "selected"
        assert InitStrategy.semi_random(0.5).name == "semi:0.5"
        assert InitStrategy.parse("semi:0.250").name == "semi:0.25"

    @pytest.mark.parametrize("strategy, size, expected", [
        (InitStrategy.random(), 100, 0),
        (InitStrategy.selected(), 100, 100),
        (InitStrategy.semi_random(0.5), 100, 50),
        (InitStrategy.semi_random(0.5), 5, 3),
        (InitStrategy.semi_random(0.25), 10, 3),
        (InitStrategy.semi_random(0.0), 100, 0),
        (InitStrategy.semi_random(1.0), 100, 100),
    ])
    def test_selected_count(self, strategy, size, expected):
        assert strategy.selected_count(size) == expected


class TestInitPopulation:

    @pytest.mark.parametrize("id", list(BenchmarkId))
    @pytest.mark.parametrize("strategy", STRATEGIES, ids=lambda s: s.name)
    @pytest.mark.parametrize("seed", range(5))
    def test_size_and_bounds(self, id, strategy, seed):
        spec = get_spec(id)
        pop = init_population(strategy, id, 100, 0.0, np.random.default_rng(seed))

        assert pop.benchmark is id
        assert pop.size == 100
        assert pop.members.shape == (100, spec.dimension)
        assert all(in_bounds(spec, x) for x in pop.members)

    def test_semi_zero_equals_random(self):
        a = init_population(InitStrategy.semi_random(0.0), BenchmarkId.SPHERE, 50, 0.0,
                            np.random.default_rng(3))
        b = init_population(InitStrategy.random(), BenchmarkId.SPHERE, 50, 0.0,
                            np.random.default_rng(3))
        assert np.array_equal(a.members, b.members)

    def test_semi_one_equals_selected(self):
        a = init_population(InitStrategy.semi_random(1.0), BenchmarkId.RASTRIGIN, 50, 0.0,
                            np.random.default_rng(3))
        b = init_population(InitStrategy.selected(), BenchmarkId.RASTRIGIN, 50, 0.0,
                            np.random.default_rng(3))
        assert np.array_equal(a.members, b.members)

    @pytest.mark.parametrize("id", [
        BenchmarkId.SPHERE, BenchmarkId.AXIS_PARALLEL, BenchmarkId.ROSENBROCK,
        BenchmarkId.RASTRIGIN, BenchmarkId.MATYAS
    ])
    def test_selected_contains_optimum(self, id):
        pop = init_population(InitStrategy.selected(), id, 100, 0.0, np.random.default_rng(0))
        best = min(evaluate(id, x) for x in pop.members)
        assert best == get_spec(id).optimum_value

    def test_semi_random_layout(self):
        pop = init_population(InitStrategy.semi_random(0.5), BenchmarkId.MICHALEWICZ, 100, 0.0,
                              np.random.default_rng(11))

        # selected members come first and sit near pi/2
        assert np.all(np.abs(pop.members[:50] - math.pi / 2) < 0.05)
        assert not np.all(np.abs(pop.members[50:] - math.pi / 2) < 0.05)

    def test_deterministic(self):
        a = init_population(InitStrategy.semi_random(0.3), BenchmarkId.BRANIN, 20, 0.0,
                            np.random.default_rng(9))
        b = init_population(InitStrategy.semi_random(0.3), BenchmarkId.BRANIN, 20, 0.0,
                            np.random.default_rng(9))
        assert np.array_equal(a.members, b.members)

    def test_numeric_seeds(self):
        pop = init_population(InitStrategy.selected(), BenchmarkId.SPHERE, 10, 0.0,
                              np.random.default_rng(0), numeric_seeds=True)

        # numeric roots sit at -eps/2 for the default numeric epsilon
        assert np.allclose(pop.members[0], -5e-7, atol=1e-9)

    def test_empty_pool(self):
        with pytest.raises(ValueError, match="empty"):
            init_population(InitStrategy.selected(), BenchmarkId.SPHERE, 10, 12.0,
                            np.random.default_rng(0))

    def test_invalid_size(self):
        with pytest.raises(ValueError):
            init_population(InitStrategy.random(), BenchmarkId.SPHERE, 0, 0.0,
                            np.random.default_rng(0))
