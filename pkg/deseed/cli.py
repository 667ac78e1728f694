"""
deseed CLI
"""
import json
import logging
import os
import sys
import numpy as np
import pandas as pd
from argparse import ArgumentParser, BooleanOptionalAction
from rich.console import Console
from rich.table import Table
from typing import Any, Dict, List, Optional
from deseed.de import DEConfig
from deseed.entities.benchmark import BenchmarkId, get_spec
from deseed.entities.population import InitStrategy
from deseed.harness import ExperimentError, ExperimentSpec, compare_table, run_experiment
from deseed.packager import Packager
from deseed.seeder import (
    DEFAULT_GRID_POINTS, DEFAULT_NUMERIC_EPSILON, analytic_seed_pool, materialize,
    numeric_seed_pool
)
from deseed.util import ConfigValidator, load_config, load_profile

EXIT_USAGE = 2
EXIT_IO = 3

FORMATS = ["table", "csv", "json"]


class CLI:
    """deseed Command-line Interface class"""

    def __init__(self, argv: Optional[List[str]] = None):
        """Initializes a new CLI instance and runs the requested command"""
        self._argv = list(sys.argv[1:] if argv is None else argv)

        cmd = self._get_cmd()

        self._setup_logger()
        self._load_config()

        getattr(self, cmd)()

    def list(self):
        """
        "list" command
        """
        parser = ArgumentParser(prog="deseed list", description="List benchmark functions")
        self._add_format_arg(parser)
        args = self._parse_args(parser)

        specs = [get_spec(id) for id in BenchmarkId]

        if args.format == "json":
            self._emit(json.dumps([spec.to_dict() for spec in specs], indent=2) + "\n")
        elif args.format == "csv":
            dat = pd.DataFrame([{
                "id": spec.id.value,
                "dimension": spec.dimension,
                "bounds": ";".join(f"{lo:g}:{hi:g}" for lo, hi in self._distinct_bounds(spec)),
                "optimum_value": spec.optimum_value,
            } for spec in specs])
            self._emit(dat.to_csv(index=False))
        else:
            table = Table(title="Benchmarks")
            for col in ["id", "dim", "bounds", "optimum"]:
                table.add_column(col)

            for spec in specs:
                bounds = ", ".join(f"[{lo:g}, {hi:g}]" for lo, hi in self._distinct_bounds(spec))
                table.add_row(spec.id.value, str(spec.dimension), bounds, f"{spec.optimum_value:.10g}")

            self._console().print(table)

    def seed(self):
        """
        "seed" command
        """
        parser = ArgumentParser(prog="deseed seed", description="Show the seed pool of a benchmark")

        parser.add_argument("benchmark", type=str, help="Benchmark id")
        parser.add_argument("--epsilon", type=float, default=None,
                            help=f"Perturbation magnitude (default: 0, or {DEFAULT_NUMERIC_EPSILON} "
                                 "with --numeric)")
        parser.add_argument("--count", type=int, default=None,
                            help="Number of points to materialize from the pool")
        parser.add_argument("--rng-seed", type=int, default=0,
                            help="Seed for the random stream used by --count (default: 0)")
        parser.add_argument("--numeric", action="store_true",
                            help="Solve the perturbation equations numerically")
        parser.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS,
                            help=f"Grid size for --numeric (default: {DEFAULT_GRID_POINTS})")
        self._add_format_arg(parser)

        args = self._parse_args(parser)
        id = self._parse_benchmark(args.benchmark)

        if args.epsilon is None:
            args.epsilon = DEFAULT_NUMERIC_EPSILON if args.numeric else 0.0

        if args.epsilon < 0:
            self._usage_error(f"Epsilon must be non-negative (got {args.epsilon})")
        if args.count is not None and args.count < 1:
            self._usage_error("--count must be positive")

        try:
            if args.numeric:
                pool = numeric_seed_pool(id, args.epsilon, args.grid_points)
            else:
                pool = analytic_seed_pool(id, args.epsilon)
        except ValueError as e:
            self._usage_error(str(e))

        points = None
        if args.count is not None:
            try:
                points = materialize(pool, args.count, np.random.default_rng(args.rng_seed))
            except ValueError as e:
                self._usage_error(str(e))

        if args.format == "json":
            out = pool.to_dict()
            if points is not None:
                out["points"] = points.tolist()
            self._emit(json.dumps(out, indent=2) + "\n")
        elif args.format == "csv":
            rows = [{"kind": "candidate", "index": d, "branch": c.branch.value, "value": c.value}
                    for d, candidates in enumerate(pool.per_dimension_candidates)
                    for c in candidates]
            rows += [{"kind": "seed", "index": k, "branch": s.branch.value,
                      "value": " ".join(repr(v) for v in s.point)}
                     for k, s in enumerate(pool.whole_point_seeds)]
            if points is not None:
                rows += [{"kind": "point", "index": k, "branch": "",
                          "value": " ".join(repr(float(v)) for v in point)}
                         for k, point in enumerate(points)]
            dat = pd.DataFrame(rows, columns=["kind", "index", "branch", "value"])
            self._emit(dat.to_csv(index=False))
        else:
            self._print_pool(pool, points)

    def run(self):
        """
        "run" command
        """
        exp_cfg = self.config.get("experiment", {})
        try:
            de_cfg = DEConfig.from_dict(self.config.get("de", {})).to_dict()
        except ValueError as e:
            self._usage_error(str(e))

        parser = ArgumentParser(prog="deseed run", description="Run a DE initialization experiment")

        parser.add_argument("benchmark", type=str, nargs="?", default=exp_cfg.get("benchmark"),
                            help="Benchmark id")
        parser.add_argument("--strategies", type=str,
                            default=",".join(exp_cfg.get("strategies", ["random", "selected"])),
                            help='Comma-separated strategies: random, selected, semi:<fraction> '
                                 '(default: "random,selected")')
        parser.add_argument("--runs", type=int, default=exp_cfg.get("runs", 40),
                            help="Runs per strategy (default: 40)")
        parser.add_argument("--epsilon", type=float, default=exp_cfg.get("epsilon", 0.0),
                            help="Perturbation magnitude for seed pools (default: 0)")
        parser.add_argument("--master-seed", type=int, default=exp_cfg.get("master_seed", 0),
                            help="Master seed for all runs (default: 0)")
        parser.add_argument("--workers", type=int, default=exp_cfg.get("workers", os.cpu_count() or 1),
                            help="Worker processes (default: number of processors)")
        parser.add_argument("--numeric", action=BooleanOptionalAction,
                            default=exp_cfg.get("numeric_seeds", False),
                            help="Build seed pools numerically (default: off)")
        parser.add_argument("--popsize", type=int, default=de_cfg["population_size"],
                            help="Population size (default: 100)")
        parser.add_argument("--weight-f", type=float, default=de_cfg["differential_weight"],
                            help="Differential weight F (default: 0.5)")
        parser.add_argument("--crossover-cr", type=float, default=de_cfg["crossover_rate"],
                            help="Crossover rate CR (default: 0.9)")
        parser.add_argument("--max-nfc", type=int, default=de_cfg["max_nfc"],
                            help="Evaluation budget per run (default: 1000000)")
        parser.add_argument("--vtr-tol", type=float, default=de_cfg["vtr_tolerance"],
                            help="Value-to-reach tolerance (default: 1e-6)")
        parser.add_argument("--out", type=str, default=None,
                            help="Write the report (json for table/json formats, csv otherwise)")
        parser.add_argument("--trace", action="store_true",
                            help="Also write per-run convergence traces and a vega-lite view")
        parser.add_argument("--package", type=str, default=None,
                            help="Write a Frictionless data package to this directory")
        self._add_format_arg(parser)

        args = self._parse_args(parser)

        if args.benchmark is None:
            self._usage_error("No benchmark specified")

        id = self._parse_benchmark(args.benchmark)

        try:
            strategies = [InitStrategy.parse(x) for x in args.strategies.split(",") if x.strip() != ""]
            config = DEConfig(population_size=args.popsize, differential_weight=args.weight_f,
                              crossover_rate=args.crossover_cr, max_nfc=args.max_nfc,
                              vtr_tolerance=args.vtr_tol)
            spec = ExperimentSpec(id, tuple(strategies), runs=args.runs, de_config=config,
                                  epsilon=args.epsilon, master_seed=args.master_seed,
                                  numeric_seeds=args.numeric)
        except ValueError as e:
            self._usage_error(str(e))

        if args.workers < 1:
            self._usage_error("--workers must be positive")

        try:
            report = run_experiment(spec, workers=args.workers)
        except ExperimentError as e:
            self._logger.error(f"{e} ({len(e.partial)} partial results discarded)")
            sys.exit(1)

        packager = Packager()
        out_format = "csv" if args.format == "csv" else "json"

        try:
            if args.out is not None:
                packager.write_report(report, args.out, format=out_format)

            if args.trace:
                trace_path = f"{os.path.splitext(args.out)[0]}.trace.csv" if args.out else "trace.csv"
                packager.write_traces(report, trace_path)

            if args.package is not None:
                packager.build_package(report, args.package, include_traces=True)
        except OSError as e:
            self._logger.error(f"Unable to write output: {e}")
            sys.exit(EXIT_IO)

        if args.out is None and args.format == "json":
            self._emit(packager.report_json(report))
        elif args.out is None and args.format == "csv":
            self._emit(packager.runs_csv(report))
        else:
            self._print_summary(report)

    def _print_summary(self, report):
        table = Table(title=f"{report.spec.benchmark.value}: {report.spec.runs} run(s) per strategy")

        for col in ["strategy", "mean NFC", "success rate"]:
            table.add_column(col)

        for row in compare_table(report):
            table.add_row(*row)

        self._console().print(table)

    def _print_pool(self, pool, points):
        console = self._console()
        console.print(f"[bold steel_blue1]{pool.benchmark.value}[/bold steel_blue1] (eps={pool.epsilon:g})")

        branches = {c.branch for candidates in pool.per_dimension_candidates for c in candidates}
        branches |= {seed.branch for seed in pool.whole_point_seeds}

        for branch in sorted(branches, key=lambda b: b.rank):
            console.print(f"  [italic]{branch.value}[/italic]: {branch.description}")

        # identical candidate sets are shown once with the coordinates they apply to
        groups: Dict[Any, List[int]] = {}
        for d, candidates in enumerate(pool.per_dimension_candidates):
            key = tuple((c.value, c.branch.value) for c in candidates)
            groups.setdefault(key, []).append(d)

        for key, dims in groups.items():
            label = f"x{dims[0] + 1}" if len(dims) == 1 else f"x{dims[0] + 1}..x{dims[-1] + 1}"
            console.print(f"[bold]{label}[/bold]: {len(key)} candidate(s) per dimension")
            for value, branch in key:
                console.print(f"  {value:.10g} ({branch})")

        if len(pool.whole_point_seeds) > 0:
            console.print(f"[bold]Seeds ({len(pool.whole_point_seeds)}):[/bold]")
            for seed in pool.whole_point_seeds:
                coords = ", ".join(f"{v:.10g}" for v in seed.point)
                console.print(f"  ({coords}) ({seed.branch.value})")

        if points is not None:
            console.print(f"[bold]Points ({len(points)}):[/bold]")
            for point in points:
                console.print("  (" + ", ".join(f"{v:.6g}" for v in point) + ")")

    def _distinct_bounds(self, spec):
        return list(dict.fromkeys(spec.bounds))

    def _add_format_arg(self, parser):
        parser.add_argument("--format", choices=FORMATS, default="table",
                            help="Output format (default: table)")

    def _parse_args(self, parser):
        args, unknown = parser.parse_known_args(self._cmd_args)

        if len(unknown) > 0:
            self._usage_error(f"Unrecognized arguments: {' '.join(unknown)}")

        return args

    def _parse_benchmark(self, name: str) -> BenchmarkId:
        try:
            return BenchmarkId.parse(name)
        except ValueError as e:
            self._usage_error(str(e))

    def _usage_error(self, msg: str):
        self._logger.error(msg)
        sys.exit(EXIT_USAGE)

    def _emit(self, text: str):
        sys.stdout.write(text)

    def _console(self) -> Console:
        return Console(file=sys.stdout)

    def _get_cmd(self):
        """
        Parses command line arguments and determine command to run + any global
        arguments.
        """
        parser = ArgumentParser(
            prog="deseed",
            description="deseed",
            usage='''deseed <command> [<args>]

List of supported commands:
   list     List benchmark functions
   seed     Show the seed pool of a benchmark
   run      Run a DE initialization experiment
''')

        parser.add_argument('command', help='Sub-command to run')

        parser.add_argument(
            "--config",
            help="Path to a YAML experiment config file",
            default=None,
        )

        parser.add_argument(
            "--verbose",
            help="If enabled, prints verbose output",
            action="store_true",
        )

        # parse and validate sub-command
        args, unknown = parser.parse_known_args(self._argv)

        self.verbose = args.verbose
        self.config_path = args.config

        valid_cmds = ['list', 'seed', 'run']

        if args.command not in valid_cmds:
            sys.stderr.write(f"[ERROR] Unrecognized command specified: {args.command}!\n")
            parser.print_help(sys.stderr)
            sys.exit(EXIT_USAGE)

        # store remaining non-global arguments
        self._cmd_args = self._strip_global_args(self._argv)

        # execute method with same name as sub-command
        return args.command

    def _strip_global_args(self, argv: List[str]) -> List[str]:
        """Drops the command name and global flags from the argument list"""
        cmd_args = []
        skip_next = False
        command_seen = False

        for arg in argv:
            if skip_next:
                skip_next = False
            elif arg == "--config":
                skip_next = True
            elif arg.startswith("--config=") or arg == "--verbose":
                pass
            elif not command_seen and not arg.startswith("-"):
                command_seen = True
            else:
                cmd_args.append(arg)

        return cmd_args

    def _load_config(self):
        """Loads and validates the optional YAML config"""
        self.config: Dict[str, Any] = {}

        if self.config_path is None:
            return

        try:
            cfg = load_config(self.config_path)
        except (FileNotFoundError, OSError) as e:
            self._logger.error(str(e))
            sys.exit(EXIT_IO)
        except ValueError as e:
            self._usage_error(str(e))

        validator = ConfigValidator(load_profile("config"))

        if not validator.validate(cfg):
            self._usage_error(f"Config validation failed: {validator.errors}")

        self.config = validator.document

    def _setup_logger(self):
        """Sets up logger to print messages to STDERR"""
        logging.basicConfig(stream=sys.stderr,
                            format='[%(levelname)s] %(message)s')

        self._logger = logging.getLogger('deseed')

        if self.verbose:
            self._logger.setLevel(logging.DEBUG)
        else:
            self._logger.setLevel(logging.WARN)
