"""
Multi-run experiment driver
"""
from __future__ import annotations
import logging
import zlib
import numpy as np
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
from deseed.de import DEConfig, RunResult, run_de
from deseed.entities.benchmark import BenchmarkId
from deseed.entities.population import InitStrategy, init_population
from deseed.seeder import DEFAULT_NUMERIC_EPSILON
from deseed.summary import compute_nfc_summary, success_rate

logger = logging.getLogger(__name__)

DEFAULT_RUNS = 40
NO_SUCCESS_MARKER = "—"


class ExperimentError(RuntimeError):
    """
    Raised when a run fails inside an experiment

    Attributes
    ----------
    partial: dict
        Results completed before the failure, keyed by (strategy index, run index)
    """
    def __init__(self, msg: str, partial: Dict[Tuple[int, int], RunResult]):
        super().__init__(msg)
        self.partial = partial


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Experiment definition

    Attributes
    ----------
    benchmark: BenchmarkId
        Benchmark to run on
    strategies: tuple
        Initialization strategies to compare
    runs: int
        Independent runs per strategy
    de_config: DEConfig
        Engine parameters shared by every run
    epsilon: float
        Perturbation magnitude for seed pools (the default numeric epsilon when
        numeric_seeds is set and epsilon is 0)
    master_seed: int
        Root of every per-run random stream (>= 0)
    numeric_seeds: bool
        Build seed pools numerically instead of in closed form
    """
    benchmark: BenchmarkId
    strategies: Tuple[InitStrategy, ...]
    runs: int = DEFAULT_RUNS
    de_config: DEConfig = field(default_factory=DEConfig)
    epsilon: float = 0.0
    master_seed: int = 0
    numeric_seeds: bool = False

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if len(self.strategies) == 0:
            raise ValueError("At least one strategy is required")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")

        object.__setattr__(self, "strategies", tuple(self.strategies))

        # numeric pools need eps > 0; record the value actually used
        if self.numeric_seeds and self.epsilon == 0:
            object.__setattr__(self, "epsilon", DEFAULT_NUMERIC_EPSILON)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "benchmark": self.benchmark.value,
            "strategies": [strategy.name for strategy in self.strategies],
            "runs": self.runs,
            "de_config": self.de_config.to_dict(),
            "epsilon": self.epsilon,
            "master_seed": self.master_seed,
            "numeric_seeds": self.numeric_seeds,
        }


@dataclass
class StrategyReport:
    strategy: InitStrategy
    run_results: List[RunResult]

    @property
    def name(self) -> str:
        return self.strategy.name

    @property
    def success_rate(self) -> float:
        return success_rate([result.success for result in self.run_results])

    @property
    def stats(self) -> Dict[str, Optional[float]]:
        """NFC statistics over the successful runs"""
        return compute_nfc_summary([r.nfc for r in self.run_results if r.success])


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    per_strategy: List[StrategyReport]

    @property
    def run_results(self) -> List[RunResult]:
        """All run results ordered by (strategy index, run index)"""
        return [result for report in self.per_strategy for result in report.run_results]

    def to_dict(self) -> Dict[str, Any]:
        per_strategy = []

        for report in self.per_strategy:
            stats = report.stats
            stats["success_rate"] = report.success_rate

            per_strategy.append({
                "name": report.name,
                "stats": stats,
                "runs": [result.to_dict() for result in report.run_results],
            })

        return {"spec": self.spec.to_dict(), "per_strategy": per_strategy}

    def runs_table(self) -> List[Dict[str, Any]]:
        """One row per run: strategy, run_index, nfc, best_value, success"""
        return [
            {"strategy": report.name, "run_index": j, "nfc": result.nfc,
             "best_value": result.best_value, "success": result.success}
            for report in self.per_strategy
            for j, result in enumerate(report.run_results)
        ]

    def traces(self) -> List[Dict[str, Any]]:
        """Long-format convergence traces for plotting"""
        return [
            {"strategy": report.name, "run_index": j, "nfc": nfc, "best_value": best}
            for report in self.per_strategy
            for j, result in enumerate(report.run_results)
            for nfc, best in result.trace
        ]


def derive_seed(master_seed: int, strategy: InitStrategy, run_index: int) -> np.random.SeedSequence:
    """
    Random stream seed for one run

    Depends only on the master seed, the canonical strategy name and the run index,
    so adding, removing or reordering strategies leaves other runs untouched.
    """
    strategy_key = zlib.crc32(strategy.name.encode("utf-8"))
    return np.random.SeedSequence([master_seed, strategy_key, run_index])


def _single_run(spec: ExperimentSpec, strategy: InitStrategy, run_index: int) -> RunResult:
    rng = np.random.default_rng(derive_seed(spec.master_seed, strategy, run_index))

    population = init_population(strategy, spec.benchmark, spec.de_config.population_size,
                                 spec.epsilon, rng, numeric_seeds=spec.numeric_seeds)

    return run_de(spec.benchmark, population, spec.de_config, rng)


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentReport:
    """
    Executes every (strategy, run) pair of an experiment

    Parameters
    ----------
    spec: ExperimentSpec
        Experiment definition
    workers: int
        Number of worker processes; 1 runs sequentially in-process

    Returns
    -------
    ExperimentReport
        Identical for any number of workers
    """
    jobs = [(s, j) for s in range(len(spec.strategies)) for j in range(spec.runs)]
    results: Dict[Tuple[int, int], RunResult] = {}

    logger.debug(f"Running {len(jobs)} DE runs on {spec.benchmark.value} with {workers} worker(s)")

    if workers <= 1:
        for s, j in jobs:
            try:
                results[(s, j)] = _single_run(spec, spec.strategies[s], j)
            except Exception as e:
                raise ExperimentError(f"Run {j} of strategy {spec.strategies[s].name} "
                                      f"failed ({len(results)} runs completed): {e}", results) from e
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {(s, j): executor.submit(_single_run, spec, spec.strategies[s], j)
                       for s, j in jobs}

            # merge by index, never by completion order
            for (s, j), future in futures.items():
                try:
                    results[(s, j)] = future.result()
                except Exception as e:
                    for other in futures.values():
                        other.cancel()
                    raise ExperimentError(f"Run {j} of strategy {spec.strategies[s].name} "
                                          f"failed ({len(results)} runs completed): {e}", results) from e

    per_strategy = [
        StrategyReport(strategy, [results[(s, j)] for j in range(spec.runs)])
        for s, strategy in enumerate(spec.strategies)
    ]

    return ExperimentReport(spec, per_strategy)


def compare_table(report: ExperimentReport) -> List[Tuple[str, str, str]]:
    """
    Summary rows (strategy name, mean NFC, success rate), one per strategy in
    experiment order

    Mean NFC is rounded to an integer; strategies without a successful run show a
    dash.
    """
    rows = []

    for strategy_report in report.per_strategy:
        mean = strategy_report.stats["mean_nfc"]
        mean_str = NO_SUCCESS_MARKER if mean is None else f"{mean:.0f}"

        rows.append((strategy_report.name, mean_str, f"{strategy_report.success_rate:.2f}"))

    return rows
