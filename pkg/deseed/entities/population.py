"""
Initial population strategies
"""
from __future__ import annotations
import math
import numpy as np
from dataclasses import dataclass
from enum import Enum
from deseed.entities.benchmark import BenchmarkId, get_spec
from deseed.seeder import analytic_seed_pool, materialize, numeric_seed_pool

DEFAULT_SELECTED_FRACTION = 0.5


class StrategyKind(str, Enum):
    RANDOM = "random"
    SELECTED = "selected"
    SEMI_RANDOM = "semi"


@dataclass(frozen=True)
class InitStrategy:
    """
    Population initialization strategy

    Attributes
    ----------
    kind: StrategyKind
        Complete random, selected, or a semi-random mix of both
    selected_fraction: float
        Share of selected members in a semi-random population (ignored otherwise)
    """
    kind: StrategyKind
    selected_fraction: float = DEFAULT_SELECTED_FRACTION

    def __post_init__(self):
        if not 0.0 <= self.selected_fraction <= 1.0:
            raise ValueError(f"Selected fraction must lie in [0, 1] (got {self.selected_fraction})")

    @classmethod
    def random(cls) -> InitStrategy:
        return cls(StrategyKind.RANDOM)

    @classmethod
    def selected(cls) -> InitStrategy:
        return cls(StrategyKind.SELECTED)

    @classmethod
    def semi_random(cls, fraction: float = DEFAULT_SELECTED_FRACTION) -> InitStrategy:
        return cls(StrategyKind.SEMI_RANDOM, fraction)

    @classmethod
    def parse(cls, text: str) -> InitStrategy:
        """
        Parses a strategy string: "random", "selected" or "semi:<fraction>"
        ("semi" alone uses the default fraction)
        """
        key = text.strip().lower()

        if key == "random":
            return cls.random()
        elif key == "selected":
            return cls.selected()
        elif key == "semi":
            return cls.semi_random()
        elif key.startswith("semi:"):
            try:
                fraction = float(key[len("semi:"):])
            except ValueError:
                raise ValueError(f"Invalid semi-random fraction in '{text}'")
            return cls.semi_random(fraction)

        raise ValueError(f"Unrecognized strategy '{text}'! Expected random, selected or semi:<fraction>")

    @property
    def name(self) -> str:
        """Canonical strategy name (stable across experiment layouts)"""
        if self.kind is StrategyKind.SEMI_RANDOM:
            return f"semi:{self.selected_fraction:g}"
        return self.kind.value

    def selected_count(self, size: int) -> int:
        """Number of members drawn from the seed pool"""
        if self.kind is StrategyKind.RANDOM:
            return 0
        elif self.kind is StrategyKind.SELECTED:
            return size
        return int(math.floor(self.selected_fraction * size + 0.5))

    def to_dict(self):
        return {"kind": self.kind.value, "selected_fraction": self.selected_fraction,
                "name": self.name}


@dataclass
class Population:
    benchmark: BenchmarkId
    members: np.ndarray

    @property
    def size(self) -> int:
        return self.members.shape[0]


def init_population(strategy: InitStrategy, id: BenchmarkId, size: int, eps: float,
                    rng: np.random.Generator, numeric_seeds=False) -> Population:
    """
    Builds an initial population

    Selected members (if any) come first, followed by members sampled uniformly
    within the bounds.

    Parameters
    ----------
    strategy: InitStrategy
        Initialization strategy
    id: BenchmarkId
        Benchmark the population is built for
    size: int
        Population size
    eps: float
        Perturbation magnitude used for the seed pool
    rng: numpy.random.Generator
        Random stream
    numeric_seeds: bool
        Solve the perturbation equations numerically instead of in closed form

    Returns
    -------
    Population
    """
    if size < 1:
        raise ValueError("Population size must be positive")

    spec = get_spec(id)
    n_selected = strategy.selected_count(size)

    parts = []

    if n_selected > 0:
        if numeric_seeds:
            pool = numeric_seed_pool(spec.id, eps) if eps > 0 else numeric_seed_pool(spec.id)
        else:
            pool = analytic_seed_pool(spec.id, eps)

        parts.append(materialize(pool, n_selected, rng))

    parts.append(rng.uniform(spec.lower, spec.upper, size=(size - n_selected, spec.dimension)))

    return Population(spec.id, np.vstack(parts))
