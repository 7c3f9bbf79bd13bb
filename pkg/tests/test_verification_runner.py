"""
HeckMort - Evaluator, cache and verification runner tests
"""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from config_manager import RunConfig
from engine_errors import (
    ArgumentError,
    ConfigError,
    InsufficientPrecision,
    NonGenericSpecialization,
)
from identity_evaluator import evaluate
from identity_parser import parse_expression
from reporting import ReportRecord, format_summary, reports_json
from series_cache import SeriesCache, cache_key
from series_core import QSeries, VerificationStatus
from verification_runner import RunResult, VerificationRunner, run_verify

IDENTITIES = """
# theta quotient form, then the builtin pair
slater: builtin(slater39_lhs) == Jbar(3,8)/Jm(2)
slater_builtin: builtin(slater39_lhs) == builtin(slater39_rhs)
builtin(andrews114_lhs) == builtin(andrews114_rhs)
"""


def test_theta_quotient_matches_builtin(run_config):
    lhs = evaluate(parse_expression("builtin(slater39_lhs)"), run_config)
    rhs = evaluate(parse_expression("Jbar(3,8)/Jm(2)"), run_config)
    assert lhs == rhs
    assert lhs.precision == run_config.order


def test_negative_power_is_partition_function(run_config):
    series = evaluate(parse_expression("Jm(1)^-1"), run_config)
    partitions = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56]
    assert series == QSeries(dict(enumerate(partitions)), 12)


def test_power_of_negative_order_series(run_config):
    series = evaluate(parse_expression("(q^-1*Jm(1))^2"), run_config)
    assert series.precision == 12
    assert series.q_order == -2
    assert series.coefficient(-2) == 1
    assert series.coefficient(-1) == -2


def test_arithmetic_of_literals(run_config):
    series = evaluate(parse_expression("2*q^1/2 - (1 - q)*3/2"), run_config)
    assert series == QSeries(
        {Fraction(1, 2): 2, 0: Fraction(-3, 2), 1: Fraction(3, 2)}, run_config.order
    )


def test_engine_errors_carry_the_call_position(run_config):
    with pytest.raises(NonGenericSpecialization) as info:
        evaluate(parse_expression("1 + thetaNP(1,1; -q^2, q^2)"), run_config)
    assert info.value.position == (1, 5)


def test_division_by_vanishing_theta(run_config):
    with pytest.raises(InsufficientPrecision) as info:
        evaluate(parse_expression("1/J(1,1)"), run_config)
    assert info.value.position == (1, 2)


def test_rejected_argument_values(run_config):
    with pytest.raises(ArgumentError) as info:
        evaluate(parse_expression("J(1,0)"), run_config)
    assert info.value.position == (1, 1)
    assert info.value.exit_code == 2


def test_run_verify_reports_in_input_order(run_config, tmp_path):
    json_path = tmp_path / "reports" / "run.json"
    result = run_verify(IDENTITIES, run_config, json_path=json_path)
    assert result.exit_code == 0
    labels = [report.label for report in result.reports]
    assert labels[:2] == ["slater", "slater_builtin"]
    assert "andrews114_lhs" in labels[2]
    records = json.loads(json_path.read_text(encoding="utf-8"))
    assert [r["status"] for r in records] == ["Verified"] * 3
    assert records[0]["checked_order"] == [12, 1]
    assert records[0]["first_mismatch"] is None


def test_mismatch_sets_exit_code(run_config):
    result = run_verify("bad: J(1,2) == Jm(1)", run_config)
    assert result.exit_code == 1
    report = result.reports[0]
    assert report.status is VerificationStatus.MISMATCH
    record = ReportRecord.from_report(report)
    assert record.first_mismatch is not None
    assert "0/1 verified" in format_summary(result.reports)


def test_empty_run_succeeds():
    assert RunResult([]).exit_code == 0


def test_identity_file_from_path(run_config, tmp_path):
    path = tmp_path / "ids.idn"
    path.write_text(IDENTITIES, encoding="utf-8")
    runner = VerificationRunner(run_config)
    assert len(runner.load(path)) == 3
    assert runner.load(Path(path)) == runner.load(IDENTITIES)


def test_order_must_be_positive(run_config):
    with pytest.raises(ConfigError):
        VerificationRunner(RunConfig(order=0))
    with pytest.raises(ConfigError):
        run_config.with_overrides(jobs=0)


def test_cache_replays_identical_reports(run_config):
    first = run_verify(IDENTITIES, run_config)
    cache = SeriesCache(run_config.cache_dir)
    stored = sorted(Path(run_config.cache_dir).glob("*.json"))
    # five distinct sides
    assert len(stored) == 5
    second = run_verify(IDENTITIES, run_config)

    def without_timing(result):
        records = json.loads(reports_json(result.reports))
        for record in records:
            record.pop("elapsed_ms")
        return records

    assert without_timing(first) == without_timing(second)
    assert cache.clear() == 5


def test_cache_entries_round_trip(tmp_path):
    cache = SeriesCache(tmp_path / "cache")
    node = parse_expression("Jm(1)")
    series = QSeries({0: 1, 1: -1, Fraction(5, 2): Fraction(3, 7)}, 6)
    assert cache.get(node, 6) is None
    cache.put(node, 6, series)
    assert cache.get(node, 6) == series
    assert cache.get(node, 7) is None
    assert (cache.hits, cache.misses) == (1, 2)
    assert cache_key(node, 6) != cache_key(node, 7)


def test_corrupt_cache_entry_is_recomputed(tmp_path):
    cache = SeriesCache(tmp_path)
    node = parse_expression("Jm(2)")
    cache.path_for(node, 5).write_text("{not json", encoding="utf-8")
    assert cache.get(node, 5) is None


def test_disabled_cache_stores_nothing(tmp_path):
    cache = SeriesCache(tmp_path, enabled=False)
    cache.put("Jm(1)", 5, QSeries.one(5))
    assert list(tmp_path.iterdir()) == []


def test_failed_cache_write_leaves_no_temporary_file(tmp_path, monkeypatch):
    cache = SeriesCache(tmp_path)

    def unserializable(*args, **kwargs):
        raise TypeError("not serializable")

    monkeypatch.setattr("series_cache.json.dump", unserializable)
    with pytest.raises(TypeError):
        cache.put("Jm(1)", 5, QSeries.one(5))
    assert list(tmp_path.iterdir()) == []
