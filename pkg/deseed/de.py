"""
Classical Differential Evolution (DE/rand/1/bin) with NFC accounting
"""
from __future__ import annotations
import logging
import numpy as np
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple
from deseed.entities.benchmark import BenchmarkId, evaluate, get_spec, in_bounds
from deseed.entities.population import Population
from deseed.util import ConfigValidator, load_profile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DEConfig:
    """
    Differential Evolution parameters

    Attributes
    ----------
    population_size: int
        Number of members (>= 4)
    differential_weight: float
        Mutation scale factor F, in (0, 2]
    crossover_rate: float
        Binomial crossover probability CR, in [0, 1]
    max_nfc: int
        Evaluation budget
    vtr_tolerance: float
        A run succeeds once best <= optimum + vtr_tolerance
    """
    population_size: int = 100
    differential_weight: float = 0.5
    crossover_rate: float = 0.9
    max_nfc: int = 1_000_000
    vtr_tolerance: float = 1e-6

    def __post_init__(self):
        if self.population_size < 4:
            raise ValueError("population_size must be at least 4 (mutation needs three "
                             "distinct members besides the target)")
        if not 0 < self.differential_weight <= 2:
            raise ValueError("differential_weight must lie in (0, 2]")
        if not 0 <= self.crossover_rate <= 1:
            raise ValueError("crossover_rate must lie in [0, 1]")
        if self.max_nfc < self.population_size:
            raise ValueError("max_nfc must cover at least the initial population")
        if self.vtr_tolerance <= 0:
            raise ValueError("vtr_tolerance must be positive")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @staticmethod
    def from_dict(dict_: Dict[str, Any]) -> DEConfig:
        """
        Creates a DEConfig from a dictionary, validated against the "de" section of
        the config profile

        Parameters
        ----------
        dict_: dict
            Any subset of the DEConfig fields

        Return
        ------
        out: DEConfig
        """
        schema = load_profile("config")["de"]["schema"]
        validator = ConfigValidator(schema)

        if not validator.validate(dict_):
            raise ValueError(f"Invalid DE configuration: {validator.errors}")

        return DEConfig(**validator.document)


@dataclass
class RunResult:
    """
    Outcome of one DE run

    Attributes
    ----------
    nfc: int
        Number of objective evaluations consumed
    best_value: float
        Best objective value found
    best_point: tuple
        Point achieving best_value
    success: bool
        Whether the value to reach was attained
    trace: list
        (nfc, best_value) pairs recorded at generation boundaries
    """
    nfc: int
    best_value: float
    best_point: Tuple[float, ...]
    success: bool
    trace: List[Tuple[int, float]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {"nfc": self.nfc, "best_value": self.best_value, "success": self.success}


class EvaluationCounter:
    """Counts objective evaluations"""
    def __init__(self):
        self.count = 0


def counted_evaluate(id: BenchmarkId, x, counter: EvaluationCounter) -> float:
    """Evaluates the objective and increments the counter by one"""
    counter.count += 1
    return evaluate(id, x)


def run_de(id: BenchmarkId, initial: Population, config: DEConfig,
           rng: np.random.Generator, counter: Optional[EvaluationCounter] = None) -> RunResult:
    """
    Runs DE/rand/1/bin from an initial population until the value to reach is
    attained or the evaluation budget is exhausted

    Trial vectors of a generation are built from the previous generation; the
    success test runs after every evaluation, so the reported NFC is tight.

    Parameters
    ----------
    id: BenchmarkId
        Benchmark to minimize
    initial: Population
        Initial population (size must equal config.population_size)
    config: DEConfig
        Engine parameters
    rng: numpy.random.Generator
        Random stream owned by this run
    counter: EvaluationCounter
        [Optional] Counter to account evaluations on; a fresh one is used by default

    Returns
    -------
    RunResult
    """
    spec = get_spec(id)
    n, dim = config.population_size, spec.dimension
    lower, upper = spec.lower, spec.upper

    if initial.size != n:
        raise ValueError(f"Initial population has {initial.size} members but "
                         f"population_size is {n}")
    if initial.members.shape[1] != dim:
        raise ValueError(f"Initial population has {initial.members.shape[1]} coordinates, "
                         f"expected {dim}")
    for member in initial.members:
        if not in_bounds(spec, member):
            raise ValueError("Initial population members must lie within bounds")

    if counter is None:
        counter = EvaluationCounter()
    start = counter.count

    target = spec.optimum_value + config.vtr_tolerance
    F, CR = config.differential_weight, config.crossover_rate

    pop = np.array(initial.members, dtype=float)
    fitness = np.array([counted_evaluate(spec.id, x, counter) for x in pop])

    best = int(np.argmin(fitness))
    best_value, best_point = float(fitness[best]), pop[best].copy()
    trace = [(counter.count - start, best_value)]

    def finish(success: bool) -> RunResult:
        nfc = counter.count - start
        if trace[-1][0] != nfc:
            trace.append((nfc, best_value))

        logger.debug(f"{spec.id.value}: nfc={nfc} best={best_value} success={success}")

        return RunResult(nfc, best_value, tuple(float(v) for v in best_point), success, trace)

    if best_value <= target:
        return finish(True)

    rows = np.arange(n)

    while True:
        # three distinct partners per target, none equal to the target
        partners = np.argsort(rng.random((n, n - 1)), axis=1)[:, :3]
        partners += partners >= rows[:, None]
        r1, r2, r3 = partners.T

        mutants = pop[r1] + F * (pop[r2] - pop[r3])

        cross = rng.random((n, dim)) < CR
        cross[rows, rng.integers(dim, size=n)] = True
        trials = np.where(cross, mutants, pop)

        # bound repair: violating coordinates are resampled uniformly
        outside = (trials < lower) | (trials > upper)
        resampled = rng.uniform(lower, upper, size=(n, dim))
        trials = np.where(outside, resampled, trials)

        next_pop = pop.copy()
        next_fitness = fitness.copy()

        for i in range(n):
            if counter.count - start >= config.max_nfc:
                return finish(False)

            value = counted_evaluate(spec.id, trials[i], counter)

            if value <= fitness[i]:
                next_pop[i] = trials[i]
                next_fitness[i] = value

                if value < best_value:
                    best_value, best_point = value, trials[i].copy()

            if best_value <= target:
                return finish(True)

        pop, fitness = next_pop, next_fitness
        trace.append((counter.count - start, best_value))
