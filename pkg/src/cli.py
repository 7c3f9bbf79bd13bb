"""
HeckMort - Command Line Interface
Entry point for verifying q-series identities from files, expressions and the catalog.

Exit codes: 0 all verified, 1 mismatch or inconclusive, 2 usage/parse/config error,
3 engine error.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from acceptance_suite import run_acceptance
from config_manager import RunConfig, get_config
from config_validator import ConfigValidator, format_validation_results
from engine_errors import HeckMortError
from eulerian import CATALOG, catalog_verify_many
from identity_evaluator import evaluate, monomial_value
from identity_parser import parse_expression, parse_monomial
from lattice_sums import EnumerationLimits
from logging_setup import get_logger, setup_logging
from master_formula import MasterParams, Specialization, check_windows, verify_master
from proof_replay import replay_proof
from reporting import format_summary, series_json, series_text, write_reports
from series_cache import SeriesCache
from series_core import VerificationReport
from verification_runner import run_verify

__version__ = "1.0.0"

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_ENGINE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckmort",
        description="Exact truncated q-series engine for Hecke-type double sums",
    )
    parser.add_argument("--version", action="version", version=f"heckmort {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="more log output (repeatable)"
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="only log errors")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="verify every equation of an identity file")
    verify.add_argument("--file", required=True, type=Path)
    verify.add_argument("--order", type=int)
    verify.add_argument("--json", type=Path, help="write the JSON report array here")
    verify.add_argument("--jobs", type=int)
    verify.add_argument("--no-cache", action="store_true")

    series = sub.add_parser("series", help="print the truncated series of an expression")
    series.add_argument("--expr", required=True)
    series.add_argument("--order", type=int)
    series.add_argument("--format", choices=("text", "json"))

    for name, description in (
        ("master", "check f = g + theta for one (n, p) and specialization"),
        ("replay", "replay the lattice-sum proof stage by stage"),
    ):
        command = sub.add_parser(name, help=description)
        command.add_argument("--n", type=int, required=True)
        command.add_argument("--p", type=int, required=True)
        command.add_argument("--x", required=True, help="monomial, e.g. --x=-q^1")
        command.add_argument("--y", required=True, help="monomial, e.g. --y=q^(1/2)")
        command.add_argument("--order", type=int)
        command.add_argument("--windows", action="store_true", help="print the window report")

    selftest = sub.add_parser("selftest", help="run the acceptance suite")
    selftest.add_argument("--report", type=Path, help="write the JSON acceptance report here")
    selftest.add_argument("--seed", type=int, default=2024)

    catalog = sub.add_parser("catalog", help="list or verify catalog identities")
    catalog.add_argument("names", nargs="*", help="identity names (default: all)")
    catalog.add_argument("--order", type=int)
    catalog.add_argument("--json", type=Path)
    catalog.add_argument("--jobs", type=int)
    catalog.add_argument("--list", action="store_true", help="list names and sources only")

    cache = sub.add_parser("cache", help="manage the series cache")
    cache.add_argument("action", choices=("clear",))

    return parser


def run_config_from(args: argparse.Namespace) -> RunConfig:
    """Config-file defaults overridden by the flags present on the command line"""
    base = get_config().run_config()
    overrides = {
        "order": getattr(args, "order", None),
        "jobs": getattr(args, "jobs", None),
        "output_format": getattr(args, "format", None),
    }
    if getattr(args, "no_cache", False):
        overrides["cache_enabled"] = False
    return base.with_overrides(**overrides)


def _print_reports(reports: Sequence[VerificationReport]) -> int:
    print(format_summary(reports))
    return EXIT_OK if all(report.verified for report in reports) else EXIT_MISMATCH


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = run_config_from(args)
    result = run_verify(args.file, cfg, json_path=args.json)
    print(format_summary(result.reports))
    return result.exit_code


def cmd_series(args: argparse.Namespace) -> int:
    cfg = run_config_from(args)
    series = evaluate(parse_expression(args.expr), cfg)
    print(series_json(series) if cfg.output_format == "json" else series_text(series))
    return EXIT_OK


MasterInputs = Tuple[RunConfig, MasterParams, Specialization, EnumerationLimits]


def _master_inputs(args: argparse.Namespace) -> MasterInputs:
    cfg = run_config_from(args)
    mp = MasterParams(args.n, args.p)
    spec = Specialization(
        monomial_value(parse_monomial(args.x)), monomial_value(parse_monomial(args.y))
    )
    if args.windows:
        print(check_windows(mp, spec).summary())
    return cfg, mp, spec, EnumerationLimits(cfg.patience, cfg.max_steps)


def cmd_master(args: argparse.Namespace) -> int:
    cfg, mp, spec, limits = _master_inputs(args)
    return _print_reports([verify_master(mp, spec, cfg.order, limits)])


def cmd_replay(args: argparse.Namespace) -> int:
    cfg, mp, spec, limits = _master_inputs(args)
    return _print_reports(replay_proof(mp, spec, cfg.order, limits))


def cmd_selftest(args: argparse.Namespace) -> int:
    validation = ConfigValidator(get_config()).validate_all()
    print(format_validation_results(validation))
    if not validation.is_valid:
        return EXIT_USAGE
    report_path = args.report
    if report_path is None:
        report_path = Path(get_config().get_output_config().reports_dir) / "acceptance_report.json"
    return EXIT_OK if run_acceptance(report_path, args.seed) else EXIT_MISMATCH


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.list:
        for entry in CATALOG.values():
            print(f"{entry.name:<22} {entry.lhs} == {entry.rhs}  ({entry.source})")
        return EXIT_OK
    cfg = run_config_from(args)
    names: List[str] = args.names or list(CATALOG)
    reports = catalog_verify_many(names, cfg.order, cfg.jobs)
    if args.json is not None:
        write_reports(args.json, reports)
    return _print_reports(reports)


def cmd_cache(args: argparse.Namespace) -> int:
    cache_config = get_config().get_cache_config()
    removed = SeriesCache(cache_config.directory).clear()
    print(f"Removed {removed} cache entries from {cache_config.directory}")
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "series": cmd_series,
    "master": cmd_master,
    "replay": cmd_replay,
    "selftest": cmd_selftest,
    "catalog": cmd_catalog,
    "cache": cmd_cache,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        setup_logging(verbosity=-1 if args.quiet else args.verbose)
        return COMMANDS[args.command](args)
    except HeckMortError as e:
        logger.debug(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, OSError) as e:
        # rejected argument values and unreadable files are usage errors
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.exception(f"Unexpected failure in {args.command}: {e}")
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
