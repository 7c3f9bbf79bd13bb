"""
HeckMort - Configuration tests
"""

import logging
import sys
from pathlib import Path

import pytest
import yaml

from config_manager import ConfigManager, RunConfig
from config_validator import ConfigValidator, format_validation_results
from engine_errors import ConfigError
from logging_setup import parse_log_size, setup_logging

DEFAULT_YAML = Path(__file__).parent.parent / "config" / "config.yaml"


@pytest.fixture
def config_file(tmp_path):
    """Write a modified copy of the shipped config and return its path"""

    def write(**sections):
        data = yaml.safe_load(DEFAULT_YAML.read_text(encoding="utf-8"))
        for section, values in sections.items():
            if values is None:
                data.pop(section)
            else:
                data[section].update(values)
        path = tmp_path / "config.yaml"
        path.write_text(yaml.safe_dump(data), encoding="utf-8")
        return str(path)

    return write


def manager(path, tmp_path):
    return ConfigManager(config_path=path, env_path=str(tmp_path / "absent.env"))


def test_shipped_configuration_loads(config_file, tmp_path, monkeypatch):
    monkeypatch.delenv("HECKMORT_ORDER", raising=False)
    monkeypatch.delenv("HECKMORT_JOBS", raising=False)
    cfg = manager(config_file(), tmp_path)
    engine = cfg.get_engine_config()
    assert engine.default_order == 60
    assert engine.enumeration_patience == 3
    run = cfg.run_config()
    assert run.order == 60
    assert run.output_format == "text"
    assert cfg.get("logging.modules.lattice_sums") == "INFO"
    assert cfg.get("no.such.key", "fallback") == "fallback"


def test_environment_overrides(config_file, tmp_path, monkeypatch):
    monkeypatch.setenv("HECKMORT_ORDER", "25")
    monkeypatch.setenv("HECKMORT_CACHE_DIR", str(tmp_path / "elsewhere"))
    monkeypatch.setenv("HECKMORT_LOG_LEVEL", "DEBUG")
    cfg = manager(config_file(), tmp_path)
    assert cfg.run_config().order == 25
    assert cfg.get_cache_config().directory == str(tmp_path / "elsewhere")
    assert cfg.get_logging_config().level == "DEBUG"


def test_bad_environment_value(config_file, tmp_path, monkeypatch):
    monkeypatch.setenv("HECKMORT_JOBS", "many")
    with pytest.raises(ConfigError):
        manager(config_file(), tmp_path)


def test_missing_section_and_bad_values(config_file, tmp_path, monkeypatch):
    monkeypatch.delenv("HECKMORT_ORDER", raising=False)
    with pytest.raises(ConfigError):
        manager(config_file(cache=None), tmp_path)
    with pytest.raises(ConfigError):
        manager(config_file(engine={"default_order": 0}), tmp_path)
    with pytest.raises(ConfigError):
        manager(str(tmp_path / "nowhere.yaml"), tmp_path)


def test_malformed_yaml(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("engine: [unclosed\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        manager(str(path), tmp_path)


def test_run_config_overrides():
    base = RunConfig(order=30)
    assert base.with_overrides(order=None, jobs=4).jobs == 4
    assert base.with_overrides(order=None).order == 30
    with pytest.raises(ConfigError):
        base.with_overrides(output_format="xml")
    with pytest.raises(ConfigError):
        RunConfig(order=10, patience=1).validated()


def test_full_validation(config_file, tmp_path, monkeypatch):
    monkeypatch.delenv("ENVIRONMENT", raising=False)
    monkeypatch.setenv("HECKMORT_CACHE_DIR", str(tmp_path / "cache"))
    cfg = manager(config_file(), tmp_path)
    result = cfg.validate_full()
    assert result.is_valid, result.errors
    assert (tmp_path / "cache").is_dir()
    assert "Status: VALID" in format_validation_results(result)


def test_validation_reports_errors(config_file, tmp_path, monkeypatch):
    monkeypatch.setenv("HECKMORT_CACHE_DIR", str(tmp_path / "cache"))
    path = config_file(
        engine={"enumeration_patience": 1},
        output={"format": "xml"},
        application={"environment": "staging"},
    )
    monkeypatch.delenv("ENVIRONMENT", raising=False)
    result = ConfigValidator(manager(path, tmp_path)).validate_all()
    assert not result.is_valid
    assert len(result.errors) == 3
    assert "Status: INVALID" in format_validation_results(result)


def test_log_sizes():
    assert parse_log_size("10MB") == 10 * 1024 * 1024
    assert parse_log_size("2kb") == 2048
    assert parse_log_size("512") == 512


def test_verbosity_sets_console_level(isolated_config):
    root = setup_logging(verbosity=2)
    console = root.handlers[-1]
    assert console.stream is sys.stderr
    assert console.level == logging.DEBUG
    assert root.level == logging.DEBUG
    assert setup_logging(verbosity=-1).handlers[-1].level == logging.ERROR
    assert setup_logging(console_level="warning").handlers[-1].level == logging.WARNING
