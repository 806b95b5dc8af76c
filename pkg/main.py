#!/usr/bin/env python3
import argparse
import asyncio
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from check_filter import CheckFilter
from checks import CHECKS, CheckOutcome, ReportRecord
from config import Config
from convergence import emit_convergence
from report_writer import ReportWriter
from scenario import ScenarioConfig
from utils import ConfigError, ConvergenceError, WorkbenchError, setup_logging

# Setup logging
setup_logging(getattr(logging, Config.LOG_LEVEL, logging.INFO))
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


@dataclass
class RunResult:
    records: List[ReportRecord]
    timings: Dict[str, float]
    out_dir: str
    files: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.records) and all(r.passed for r in self.records)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_FAILED


class WorkbenchRunner:
    """Runs the checks of one scenario and writes its report file set"""

    def __init__(self, scenario: ScenarioConfig, seeds: List[int], out_dir: str,
                 tol_scale: float = 1.0, max_workers: int = Config.MAX_WORKERS):
        if tol_scale <= 0:
            raise ConfigError(f"--tol-scale must be positive, got {tol_scale}")
        self.scenario = scenario
        self.seeds = seeds
        self.tol_scale = tol_scale
        self.max_workers = max(1, max_workers)
        self.writer = ReportWriter(out_dir)

    def _tasks(self) -> List[Tuple[str, int]]:
        return [(check_id, seed) for check_id in self.scenario.checks for seed in self.seeds]

    async def _run_check(self, check_id: str, seed: int, semaphore: asyncio.Semaphore) -> Tuple[CheckOutcome, float]:
        check = CHECKS[check_id](self.scenario, seed, self.tol_scale)
        async with semaphore:
            start = time.perf_counter()
            outcome = await asyncio.to_thread(check.run)
            return outcome, time.perf_counter() - start

    async def run_checks(self) -> RunResult:
        """Run every (check, seed) concurrently; exceptions become failed records"""
        info = self.scenario.surface().get_surface_info()
        print(f"\nRunning {len(self.scenario.checks)} checks of '{self.scenario.name}' "
              f"for seeds {self.seeds} on {info['model']} k={info['level']} (charts: {', '.join(info['charts'])})...")
        semaphore = asyncio.Semaphore(self.max_workers)
        tasks = self._tasks()
        results = await asyncio.gather(
            *(self._run_check(check_id, seed, semaphore) for check_id, seed in tasks),
            return_exceptions=True,
        )

        records: List[ReportRecord] = []
        timings: Dict[str, float] = {}
        fiber_tables, plots = [], {}
        for (check_id, seed), result in zip(tasks, results):
            label = check_id if len(self.seeds) == 1 else f"{check_id}[seed={seed}]"
            if isinstance(result, Exception):
                message = result.message if isinstance(result, WorkbenchError) else repr(result)
                logger.error(f"{label}: Error - {message}")
                print(f"  [ERROR] {label}: {message}")
                failed = ReportRecord.failure(check_id, message)
                failed.params['seed'] = seed
                records.append(failed)
                continue
            outcome, wall = result
            timings[label] = wall
            for record in outcome.records:
                record.params['seed'] = seed
                record.wall_time = wall
            records.extend(outcome.records)
            fiber_tables.extend(outcome.fiber_tables)
            for name, rows in outcome.plots.items():
                plots[name if len(self.seeds) == 1 else f"{name}_seed{seed}"] = rows
            status = '[OK]' if outcome.passed else '[FAIL]'
            print(f"  {status} {label}: {sum(r.passed for r in outcome.records)}/{len(outcome.records)} "
                  f"records pass ({wall:.2f}s)")

        result = RunResult(records, timings, self.writer.out_dir)
        for record in records:
            if not record.passed:
                print(f"    {self.writer.format_record(record)}")
        result.files.append(self.writer.write_report(records, self.scenario.name, self.seeds[0]))
        result.files.append(self.writer.write_timings(timings))
        if fiber_tables:
            result.files.append(self.writer.write_fibers(fiber_tables))
        for name in sorted(plots):
            if plots[name]:
                result.files.append(self.writer.write_plot(name, plots[name]))
        return result


def _default_out_dir(scenario: ScenarioConfig) -> str:
    if scenario.output:
        return scenario.output
    slug = os.path.splitext(os.path.basename(scenario.name))[0] or 'scenario'
    return os.path.join(Config.OUTPUT_DIR, slug)


def run_scenario(config_path: str, seed: Optional[int] = None, out_dir: Optional[str] = None,
                 tol_scale: Optional[float] = None) -> RunResult:
    """Load, filter and run a scenario; raises ConfigError on invalid input"""
    scenario = ScenarioConfig.load(config_path)
    enabled = CheckFilter.filter_checks(scenario.checks, Config.ENABLED_CHECKS)
    if enabled != scenario.checks:
        print(f"  [Filter] Running {len(enabled)} / {len(scenario.checks)} checks ({', '.join(sorted(Config.ENABLED_CHECKS))})")
        scenario = scenario.restricted_to(enabled)
    if seed is not None:
        seeds = [seed]
    else:
        seeds = scenario.seeds or [Config.DEFAULT_SEED]
    runner = WorkbenchRunner(
        scenario, seeds, out_dir or _default_out_dir(scenario),
        tol_scale=Config.TOL_SCALE if tol_scale is None else tol_scale,
    )
    return asyncio.run(runner.run_checks())


def cmd_run(args) -> int:
    result = run_scenario(args.config, args.seed, args.out_dir, args.tol_scale)
    passed = sum(r.passed for r in result.records)
    print(f"\n{passed}/{len(result.records)} records pass; reports in {result.out_dir}")
    return result.exit_code


def cmd_list_checks(args) -> int:
    for check_id, cls in CHECKS.items():
        group = CheckFilter.categorize_check(check_id)
        print(f"{check_id:<14} [{group}] {cls.description}")
    return EXIT_OK


def cmd_converge(args) -> int:
    records = []
    for path in args.reports:
        try:
            records.extend(ReportWriter.load_records(path))
        except (OSError, ValueError, KeyError) as e:
            raise ConfigError(f"Cannot read report {path}: {e}")
    rows = emit_convergence(records)
    writer = ReportWriter(args.out_dir or Config.OUTPUT_DIR)
    writer.write_convergence(rows)
    flagged = [row for row in rows if row.flagged]
    for row in rows:
        tag = '[FAIL]' if row.flagged else '[OK]'
        order = row.order if isinstance(row.order, str) else f"{row.order:.3f}"
        print(f"  {tag} {row.check_id} {row.label}: order {order} over N = {row.n_values}")
    return EXIT_FAILED if flagged else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='alag', description='Numerical workbench for half-weighted BS cycles')
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='run a scenario file')
    run.add_argument('config', help='scenario JSON file')
    run.add_argument('--seed', type=int, default=None, help='override the scenario seeds')
    run.add_argument('--out-dir', default=None, help=f'report directory (default under {Config.OUTPUT_DIR})')
    run.add_argument('--tol-scale', type=float, default=None, help='multiply every tolerance')
    run.set_defaults(handler=cmd_run)

    listing = sub.add_parser('list-checks', help='list the available checks')
    listing.set_defaults(handler=cmd_list_checks)

    converge = sub.add_parser('converge', help='fit convergence orders over report files')
    converge.add_argument('reports', nargs='+', help='report.json files')
    converge.add_argument('--out-dir', default=None)
    converge.set_defaults(handler=cmd_converge)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, ConvergenceError) as e:
        logger.error(e.message)
        print(f"[ERROR] {e.message}")
        return EXIT_INVALID
    except KeyboardInterrupt:
        print("\n\n[BYE] Interrupted")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
