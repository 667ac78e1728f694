"""
Selected-point seeding

Candidate points are solutions of the perturbation-invariance equation
F(x) = F(x + eps * e_m). Closed forms are hard-coded per benchmark; for
dimension-separable benchmarks the one-dimensional equations can also be solved
numerically.
"""
from __future__ import annotations
import itertools
import logging
import math
import numpy as np
from dataclasses import dataclass, field
from enum import Enum
from scipy.optimize import root_scalar
from typing import Callable, List, Sequence, Tuple
from deseed.entities.benchmark import (
    BRANIN_B, BRANIN_C, BRANIN_D, BenchmarkId, get_spec
)

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 10001
DEFAULT_NUMERIC_EPSILON = 1e-6
BISECTION_TOLERANCE = 1e-12
DEDUP_TOLERANCE = 1e-8
RESIDUAL_TOLERANCE = 1e-9
JITTER_SCALE = 1e-3


class CandidateBranch(str, Enum):
    """Which term of the objective a candidate was derived from"""
    QUADRATIC_TERM = "quadratic"
    TRIG_TERM = "trig"

    @property
    def description(self) -> str:
        if self is CandidateBranch.QUADRATIC_TERM:
            return "root of the perturbed polynomial term"
        return "root of the perturbed trigonometric term"

    @property
    def rank(self) -> int:
        return 0 if self is CandidateBranch.QUADRATIC_TERM else 1


@dataclass(frozen=True)
class Candidate:
    value: float
    branch: CandidateBranch


@dataclass(frozen=True)
class WholePointSeed:
    point: Tuple[float, ...]
    branch: CandidateBranch


@dataclass
class SeedPool:
    """
    Candidate seeds for one benchmark

    Attributes
    ----------
    benchmark: BenchmarkId
        Benchmark the pool belongs to
    epsilon: float
        Perturbation magnitude the pool was solved for
    per_dimension_candidates: list
        One ranked candidate list per coordinate (empty for coupled benchmarks)
    whole_point_seeds: list
        Complete points, for benchmarks whose coordinates are coupled
    """
    benchmark: BenchmarkId
    epsilon: float
    per_dimension_candidates: List[List[Candidate]] = field(default_factory=list)
    whole_point_seeds: List[WholePointSeed] = field(default_factory=list)

    def is_empty(self) -> bool:
        has_candidates = len(self.per_dimension_candidates) > 0 and all(
            len(candidates) > 0 for candidates in self.per_dimension_candidates)
        return not has_candidates and len(self.whole_point_seeds) == 0

    def to_dict(self):
        return {
            "benchmark": self.benchmark.value,
            "epsilon": self.epsilon,
            "per_dimension_candidates": [
                [{"value": c.value, "branch": c.branch.value} for c in candidates]
                for candidates in self.per_dimension_candidates
            ],
            "whole_point_seeds": [
                {"point": list(seed.point), "branch": seed.branch.value}
                for seed in self.whole_point_seeds
            ],
        }


def _periodic_values(offset: float, period: float, lo: float, hi: float) -> List[float]:
    """All offset + k * period (k integer) inside the closed interval [lo, hi]"""
    k_min = math.ceil((lo - offset) / period) - 1
    k_max = math.floor((hi - offset) / period) + 1

    values = [offset + k * period for k in range(k_min, k_max + 1)]

    return [v for v in values if lo <= v <= hi]


def _rank(candidates: List[Candidate]) -> List[Candidate]:
    """Sorts candidates (quadratic branch first) and drops near-duplicates within a branch"""
    ranked: List[Candidate] = []

    for candidate in sorted(candidates, key=lambda c: (c.branch.rank, c.value)):
        duplicate = any(
            other.branch is candidate.branch and abs(other.value - candidate.value) <= DEDUP_TOLERANCE
            for other in ranked
        )
        if not duplicate:
            ranked.append(candidate)

    return ranked


def _in_box(point: Sequence[float], bounds) -> bool:
    return all(lo <= v <= hi for v, (lo, hi) in zip(point, bounds))


def _add_seed(seeds: List[WholePointSeed], point: Sequence[float],
              branch: CandidateBranch, bounds):
    # out-of-bounds solutions are dropped, never clamped
    if not _in_box(point, bounds):
        return

    for seed in seeds:
        if max(abs(a - b) for a, b in zip(seed.point, point)) <= DEDUP_TOLERANCE:
            return

    seeds.append(WholePointSeed(tuple(float(v) for v in point), branch))


def _branin_x2(x1: float, eps: float) -> float:
    return BRANIN_B * x1 ** 2 - BRANIN_C * x1 + BRANIN_D + eps / 2


def analytic_seed_pool(id: BenchmarkId, eps: float = 0.0) -> SeedPool:
    """
    Builds the seed pool from the closed-form solutions of the perturbation equation

    Parameters
    ----------
    id: BenchmarkId
        Benchmark to seed
    eps: float
        Perturbation magnitude (>= 0)

    Returns
    -------
    SeedPool
        All in-bounds candidates; deterministic
    """
    if eps < 0:
        raise ValueError(f"Epsilon must be non-negative (got {eps})")

    spec = get_spec(id)
    pool = SeedPool(spec.id, eps)
    quad, trig = CandidateBranch.QUADRATIC_TERM, CandidateBranch.TRIG_TERM

    if spec.id in (BenchmarkId.SPHERE, BenchmarkId.AXIS_PARALLEL):
        for lo, hi in spec.bounds:
            pool.per_dimension_candidates.append(
                _rank([Candidate(eps / 2, quad)] if lo <= eps / 2 <= hi else []))

    elif spec.id is BenchmarkId.RASTRIGIN:
        # cosine argument perturbed as cos(2 pi x - eps): x = (+-k pi + eps) / (4 pi)
        for lo, hi in spec.bounds:
            candidates = [Candidate(eps / 2, quad)] if lo <= eps / 2 <= hi else []
            candidates += [Candidate(v, trig)
                           for v in _periodic_values(eps / (4 * math.pi), 0.25, lo, hi)]
            pool.per_dimension_candidates.append(_rank(candidates))

    elif spec.id is BenchmarkId.MICHALEWICZ:
        # x = k pi +- pi/2 + eps/2; both signs fall on the same pi-periodic family
        for lo, hi in spec.bounds:
            candidates = [Candidate(v, trig)
                          for v in _periodic_values(math.pi / 2 + eps / 2, math.pi, lo, hi)]
            pool.per_dimension_candidates.append(_rank(candidates))

    elif spec.id is BenchmarkId.ROSENBROCK:
        # the closed form is only real-valued at eps = 0, where it gives the all-ones point
        _add_seed(pool.whole_point_seeds, [1.0] * spec.dimension, quad, spec.bounds)

    elif spec.id is BenchmarkId.BRANIN:
        (lo1, hi1), _ = spec.bounds

        x1 = (BRANIN_B * eps + BRANIN_C) / (2 * BRANIN_B)
        _add_seed(pool.whole_point_seeds, [x1, _branin_x2(x1, eps)], quad, spec.bounds)

        for x1 in _periodic_values(eps / 2, math.pi, lo1, hi1):
            _add_seed(pool.whole_point_seeds, [x1, _branin_x2(x1, eps)], trig, spec.bounds)

    elif spec.id is BenchmarkId.MATYAS:
        x2 = eps / 2
        x1 = -(0.48 / 0.52) * x2 + 0.26 * eps / 0.52
        _add_seed(pool.whole_point_seeds, [x1, x2], quad, spec.bounds)

    return pool


def numeric_perturbation_roots(f: Callable[[float], float], lo: float, hi: float,
                               eps: float = DEFAULT_NUMERIC_EPSILON,
                               grid_points: int = DEFAULT_GRID_POINTS) -> List[float]:
    """
    Solves f(x + eps) = f(x) on [lo, hi]

    The difference g(x) = f(x + eps) - f(x) is scanned on a uniform grid for sign
    changes and every bracket is refined by bisection.

    Parameters
    ----------
    f: callable
        One-dimensional real function
    lo, hi: float
        Search interval
    eps: float
        Perturbation magnitude (> 0)
    grid_points: int
        Number of grid points (>= 2)

    Returns
    -------
    list
        Sorted, deduplicated roots
    """
    if eps <= 0:
        raise ValueError("Numeric perturbation roots require eps > 0; at eps = 0 every point is a solution")
    if grid_points < 2:
        raise ValueError("At least two grid points are required")
    if not lo < hi:
        raise ValueError(f"Invalid interval ({lo}, {hi})")

    def g(x):
        return float(f(x + eps)) - float(f(x))

    grid = np.linspace(lo, hi, grid_points)

    with np.errstate(all="ignore"):
        diffs = np.array([g(x) for x in grid], dtype=float)

    finite = np.isfinite(diffs)

    if not np.any(finite):
        logger.warning("f(x + eps) - f(x) is non-finite on the whole grid")
        return []
    elif np.all(diffs[finite] == 0):
        logger.warning("f(x + eps) - f(x) vanishes on the whole grid; no isolated roots")
        return []

    roots = [float(x) for x, d in zip(grid, diffs) if d == 0]

    skipped = 0
    signs = np.sign(diffs)

    for i in range(grid_points - 1):
        if not (finite[i] and finite[i + 1]):
            skipped += 1
            continue

        if signs[i] * signs[i + 1] < 0:
            sol = root_scalar(g, bracket=(grid[i], grid[i + 1]), method="bisect",
                              xtol=BISECTION_TOLERANCE)
            roots.append(float(sol.root))

    if skipped > 0:
        logger.warning(f"Skipped {skipped} bracket(s) with non-finite function values")

    accepted = []

    for root in roots:
        residual = abs(g(root))
        if residual <= RESIDUAL_TOLERANCE * (1 + abs(float(f(root)))):
            accepted.append(root)
        else:
            logger.warning(f"Dropping sign change at {root} (residual {residual}); not a root")

    deduped: List[float] = []

    for root in sorted(accepted):
        if len(deduped) == 0 or root - deduped[-1] > DEDUP_TOLERANCE:
            deduped.append(root)

    return deduped


TermFactory = Callable[[int], Callable[[float], float]]


def separable_terms(id: BenchmarkId) -> List[Tuple[CandidateBranch, TermFactory]]:
    """
    Per-coordinate terms of a dimension-separable benchmark

    Each entry pairs a branch label with a factory mapping the (1-based) coordinate
    index to the one-dimensional term perturbed along that coordinate.
    """
    spec = get_spec(id)
    quad, trig = CandidateBranch.QUADRATIC_TERM, CandidateBranch.TRIG_TERM

    if spec.id is BenchmarkId.SPHERE:
        return [(quad, lambda i: lambda x: x ** 2)]
    elif spec.id is BenchmarkId.AXIS_PARALLEL:
        return [(quad, lambda i: lambda x: i * x ** 2)]
    elif spec.id is BenchmarkId.RASTRIGIN:
        return [(quad, lambda i: lambda x: x ** 2),
                (trig, lambda i: lambda x: -10 * math.cos(2 * math.pi * x))]
    elif spec.id is BenchmarkId.MICHALEWICZ:
        return [(trig, lambda i: math.sin)]

    raise ValueError(f"{spec.id.value} is not dimension-separable; use the analytic seed pool")


def numeric_seed_pool(id: BenchmarkId, eps: float = DEFAULT_NUMERIC_EPSILON,
                      grid_points: int = DEFAULT_GRID_POINTS) -> SeedPool:
    """Builds a seed pool by solving each per-coordinate term numerically"""
    spec = get_spec(id)
    terms = separable_terms(spec.id)
    pool = SeedPool(spec.id, eps)

    for i, (lo, hi) in enumerate(spec.bounds, start=1):
        candidates = []

        for branch, factory in terms:
            for root in numeric_perturbation_roots(factory(i), lo, hi, eps, grid_points):
                candidates.append(Candidate(root, branch))

        pool.per_dimension_candidates.append(_rank(candidates))

    return pool


def materialize(pool: SeedPool, count: int, rng: np.random.Generator) -> np.ndarray:
    """
    Turns a seed pool into exactly `count` in-bounds points

    Whole-point seeds come first, then combinations of per-dimension candidates
    (the full Cartesian product if it fits, otherwise the first-ranked combination
    followed by independent per-coordinate draws). Remaining slots are filled with
    jittered copies of the seeds above.

    Parameters
    ----------
    pool: SeedPool
        Pool to draw from
    count: int
        Number of points to return
    rng: numpy.random.Generator
        Random stream (not shared across concurrent calls)

    Returns
    -------
    numpy.ndarray
        Array of shape (count, dimension)
    """
    if count < 1:
        raise ValueError("count must be positive")
    if pool.is_empty():
        raise ValueError(f"Seed pool for {pool.benchmark.value} (eps={pool.epsilon}) is empty; "
                         "no in-bounds solutions to materialize")

    spec = get_spec(pool.benchmark)
    lower, upper = spec.lower, spec.upper

    points: List[np.ndarray] = [np.array(seed.point, dtype=float)
                                for seed in pool.whole_point_seeds[:count]]

    candidate_sets = pool.per_dimension_candidates

    if len(candidate_sets) > 0 and all(len(c) > 0 for c in candidate_sets) and len(points) < count:
        remaining = count - len(points)
        product_size = math.prod(len(c) for c in candidate_sets)

        if product_size <= remaining:
            for combo in itertools.product(*candidate_sets):
                points.append(np.array([c.value for c in combo], dtype=float))
        else:
            points.append(np.array([c[0].value for c in candidate_sets], dtype=float))

            for _ in range(remaining - 1):
                points.append(np.array([c[rng.integers(len(c))].value for c in candidate_sets],
                                       dtype=float))

    originals = len(points)
    sigma = JITTER_SCALE * (upper - lower)

    for j in range(count - originals):
        base = points[j % originals]
        points.append(np.clip(base + rng.normal(0.0, sigma), lower, upper))

    return np.vstack(points)
