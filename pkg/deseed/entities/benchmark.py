"""
Benchmark objective definitions
"""
from __future__ import annotations
import math
import numpy as np
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Sequence, Tuple

# Branin constants
BRANIN_A = 1.0
BRANIN_B = 5.1 / (4 * math.pi ** 2)
BRANIN_C = 5 / math.pi
BRANIN_D = 6.0
BRANIN_E = 10.0
BRANIN_F = 1 / (8 * math.pi)

MICHALEWICZ_STEEPNESS = 20


class BenchmarkId(str, Enum):
    """Identifiers of the supported benchmark objectives"""
    SPHERE = "sphere"
    AXIS_PARALLEL = "axis_parallel"
    ROSENBROCK = "rosenbrock"
    RASTRIGIN = "rastrigin"
    BRANIN = "branin"
    MICHALEWICZ = "michalewicz"
    MATYAS = "matyas"

    @classmethod
    def parse(cls, name: str) -> BenchmarkId:
        """
        Looks up a benchmark id by name

        Names are case-insensitive and "-" may be used in place of "_".

        Parameters
        ----------
        name: str
            Benchmark name, e.g. "sphere" or "axis-parallel"

        Returns
        -------
        BenchmarkId
        """
        key = name.strip().lower().replace("-", "_")

        for member in cls:
            if member.value == key:
                return member

        valid = ", ".join(member.value for member in cls)
        raise ValueError(f"Unknown benchmark '{name}'! Valid choices are: {valid}")


@dataclass(frozen=True)
class BenchmarkSpec:
    """
    Immutable description of a benchmark objective

    Attributes
    ----------
    id: BenchmarkId
        Benchmark identifier
    dimension: int
        Number of coordinates
    bounds: tuple
        One closed (lo, hi) interval per coordinate
    optimum_value: float
        Known global minimum value
    optimizers: tuple
        Known global minimizer points
    optimum_tolerance: float
        Absolute tolerance within which the optimizers reproduce optimum_value
    """
    id: BenchmarkId
    dimension: int
    bounds: Tuple[Tuple[float, float], ...]
    optimum_value: float
    optimizers: Tuple[Tuple[float, ...], ...]
    optimum_tolerance: float = 1e-9

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("Benchmark dimension must be positive")
        if len(self.bounds) != self.dimension:
            raise ValueError("Expected one (lo, hi) pair per coordinate")
        for lo, hi in self.bounds:
            if not lo < hi:
                raise ValueError(f"Invalid bounds ({lo}, {hi})")

    @property
    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.bounds], dtype=float)

    @property
    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.bounds], dtype=float)

    def to_dict(self) -> Dict:
        return {
            "id": self.id.value,
            "dimension": self.dimension,
            "bounds": [list(pair) for pair in self.bounds],
            "optimum_value": self.optimum_value,
            "optimizers": [list(point) for point in self.optimizers],
        }


def _box(lo: float, hi: float, dimension: int) -> Tuple[Tuple[float, float], ...]:
    return tuple((lo, hi) for _ in range(dimension))


_SPECS: Dict[BenchmarkId, BenchmarkSpec] = {
    BenchmarkId.SPHERE: BenchmarkSpec(
        BenchmarkId.SPHERE, 30, _box(-5.12, 5.12, 30), 0.0, ((0.0,) * 30,)),
    BenchmarkId.AXIS_PARALLEL: BenchmarkSpec(
        BenchmarkId.AXIS_PARALLEL, 30, _box(-5.12, 5.12, 30), 0.0, ((0.0,) * 30,)),
    BenchmarkId.ROSENBROCK: BenchmarkSpec(
        BenchmarkId.ROSENBROCK, 30, _box(-2.0, 2.0, 30), 0.0, ((1.0,) * 30,)),
    BenchmarkId.RASTRIGIN: BenchmarkSpec(
        BenchmarkId.RASTRIGIN, 10, _box(-5.12, 5.12, 10), 0.0, ((0.0,) * 10,)),
    BenchmarkId.BRANIN: BenchmarkSpec(
        BenchmarkId.BRANIN, 2, ((-5.0, 10.0), (0.0, 15.0)), 0.39788735772973816,
        ((-math.pi, 12.275), (math.pi, 2.275), (3 * math.pi, 2.475)),
        optimum_tolerance=1e-4),
    # published optimum is rounded to six decimals
    BenchmarkId.MICHALEWICZ: BenchmarkSpec(
        BenchmarkId.MICHALEWICZ, 5, _box(0.0, math.pi, 5), -4.687658,
        ((2.202906, 1.570796, 1.284992, 1.923058, 1.720470),),
        optimum_tolerance=1e-5),
    BenchmarkId.MATYAS: BenchmarkSpec(
        BenchmarkId.MATYAS, 2, _box(-10.0, 10.0, 2), 0.0, ((0.0, 0.0),)),
}


def get_spec(id: BenchmarkId | str) -> BenchmarkSpec:
    """Returns the definition (dimension, bounds, optimum) of a benchmark"""
    if not isinstance(id, BenchmarkId):
        id = BenchmarkId.parse(id)

    return _SPECS[id]


def _as_point(spec: BenchmarkSpec, x: Sequence[float]) -> np.ndarray:
    point = np.asarray(x, dtype=float)

    if point.ndim != 1 or point.shape[0] != spec.dimension:
        actual = point.shape[0] if point.ndim == 1 else point.shape
        raise ValueError(f"Dimension mismatch for {spec.id.value}: expected "
                         f"{spec.dimension} coordinates, got {actual}")

    return point


def _sphere(x: np.ndarray) -> float:
    return float(np.sum(x ** 2))


def _axis_parallel(x: np.ndarray) -> float:
    i = np.arange(1, x.shape[0] + 1)
    return float(np.sum(i * x ** 2))


def _rosenbrock(x: np.ndarray) -> float:
    return float(np.sum(100 * (x[1:] - x[:-1] ** 2) ** 2 + (1 - x[:-1]) ** 2))


def _rastrigin(x: np.ndarray) -> float:
    return float(100 + np.sum(x ** 2 - 10 * np.cos(2 * np.pi * x)))


def _branin(x: np.ndarray) -> float:
    x1, x2 = x
    u = x2 - BRANIN_B * x1 ** 2 + BRANIN_C * x1 - BRANIN_D
    return float(BRANIN_A * u ** 2 + BRANIN_E * (1 - BRANIN_F) * np.cos(x1) + BRANIN_E)


def _michalewicz(x: np.ndarray) -> float:
    i = np.arange(1, x.shape[0] + 1)
    return float(-np.sum(np.sin(x) * np.sin(i * x ** 2 / np.pi) ** MICHALEWICZ_STEEPNESS))


def _matyas(x: np.ndarray) -> float:
    x1, x2 = x
    return float(0.26 * (x1 ** 2 + x2 ** 2) - 0.48 * (x1 * x2))


_OBJECTIVES = {
    BenchmarkId.SPHERE: _sphere,
    BenchmarkId.AXIS_PARALLEL: _axis_parallel,
    BenchmarkId.ROSENBROCK: _rosenbrock,
    BenchmarkId.RASTRIGIN: _rastrigin,
    BenchmarkId.BRANIN: _branin,
    BenchmarkId.MICHALEWICZ: _michalewicz,
    BenchmarkId.MATYAS: _matyas,
}


def evaluate(id: BenchmarkId, x: Sequence[float]) -> float:
    """
    Evaluates a benchmark objective at a point

    Parameters
    ----------
    id: BenchmarkId
        Benchmark to evaluate
    x: sequence of float
        Point with exactly as many coordinates as the benchmark dimension

    Returns
    -------
    float
        Objective value
    """
    spec = get_spec(id)
    point = _as_point(spec, x)

    if not np.all(np.isfinite(point)):
        raise ValueError("Points must have finite coordinates")

    return _OBJECTIVES[spec.id](point)


def in_bounds(spec: BenchmarkSpec, x: Sequence[float]) -> bool:
    """True if every coordinate lies in its closed interval"""
    point = _as_point(spec, x)
    return bool(np.all((point >= spec.lower) & (point <= spec.upper)))
