"""
HeckMort - Verification Runner
Verifies identity files equation by equation, with caching and a process pool.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from config_manager import RunConfig
from identity_evaluator import evaluate
from identity_parser import Equation, Node, parse_file, to_source
from logging_setup import LoggerMixin, log_execution_time
from reporting import write_reports
from series_cache import SeriesCache
from series_core import QSeries, VerificationReport, compare


@dataclass(frozen=True)
class RunResult:
    """Reports in input order plus the process exit code"""
    reports: List[VerificationReport]

    @property
    def exit_code(self) -> int:
        return 0 if all(report.verified for report in self.reports) else 1


def equation_label(equation: Equation) -> str:
    return equation.label or to_source(equation)


def _open_cache(cfg: RunConfig) -> Optional[SeriesCache]:
    if not cfg.cache_enabled or not cfg.cache_dir:
        return None
    return SeriesCache(cfg.cache_dir)


def evaluate_side(side: Node, cfg: RunConfig, cache: Optional[SeriesCache] = None) -> QSeries:
    """Evaluate one side, reading and filling the cache when one is given"""
    if cache is not None:
        cached = cache.get(side, cfg.order)
        if cached is not None:
            return cached
    series = evaluate(side, cfg)
    if cache is not None:
        cache.put(side, cfg.order, series)
    return series


def verify_equation(equation: Equation, cfg: RunConfig) -> VerificationReport:
    """lhs == rhs below q^order"""
    started = time.perf_counter()
    cache = _open_cache(cfg)
    lhs = evaluate_side(equation.lhs, cfg, cache)
    rhs = evaluate_side(equation.rhs, cfg, cache)
    return compare(
        lhs, rhs, label=equation_label(equation), required=cfg.order, started=started
    )


def _verify_task(task: Tuple[Equation, RunConfig]) -> VerificationReport:
    equation, cfg = task
    return verify_equation(equation, cfg)


class VerificationRunner(LoggerMixin):
    """Runs a batch of equations at one configuration"""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg.validated()

    def load(self, source: Union[str, Path, Sequence[Equation]]) -> List[Equation]:
        """Equations from a file path, inline DSL text, or a ready list"""
        if isinstance(source, Path):
            text = source.read_text(encoding="utf-8")
            self.logger.info(f"Loaded identity file {source}")
            return parse_file(text)
        if isinstance(source, str):
            return parse_file(source)
        return list(source)

    def run(self, equations: Sequence[Equation]) -> RunResult:
        tasks = [(equation, self.cfg) for equation in equations]
        self.logger.info(
            f"Verifying {len(tasks)} equations below q^{self.cfg.order} with {self.cfg.jobs} jobs"
        )
        if self.cfg.jobs <= 1 or len(tasks) <= 1:
            reports = [_verify_task(task) for task in tasks]
        else:
            with ProcessPoolExecutor(max_workers=self.cfg.jobs) as pool:
                reports = list(pool.map(_verify_task, tasks))

        for report in reports:
            if report.verified:
                self.logger.info(report.summary())
            else:
                self.logger.warning(report.summary())
        return RunResult(reports)


@log_execution_time
def run_verify(
    source: Union[str, Path, Sequence[Equation]],
    cfg: RunConfig,
    json_path: Optional[Union[str, Path]] = None,
) -> RunResult:
    """
    Verify every equation of an identity file.

    Args:
        source: path to a file, inline DSL text, or parsed equations
        cfg: run configuration (order, jobs, cache)
        json_path: where to write the JSON report array, if anywhere

    Returns:
        RunResult with one report per equation, in input order
    """
    runner = VerificationRunner(cfg)
    result = runner.run(runner.load(source))
    if json_path is not None:
        written = write_reports(json_path, result.reports)
        runner.logger.info(f"Report written to {written}")
    return result
