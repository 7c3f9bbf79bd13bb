"""
HeckMort - Configuration Validator
Section-by-section validation of the engine, cache, output and logging settings
"""

import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from config_manager import ConfigManager, get_config
from logging_setup import LoggerMixin


@dataclass
class ValidationResult:
    """Validation result structure"""
    is_valid: bool
    errors: List[str]
    warnings: List[str]
    info: List[str]


class ConfigValidator(LoggerMixin):
    """Configuration validator used by `heckmort selftest` and ConfigManager.validate_full"""

    def __init__(self, config: Optional[ConfigManager] = None):
        self.config = config if config is not None else get_config()

    def validate_all(self) -> ValidationResult:
        """Validate all configuration sections"""
        result = ValidationResult(True, [], [], [])

        sections = [
            self._validate_application,
            self._validate_engine,
            self._validate_cache,
            self._validate_output,
            self._validate_logging,
        ]

        for validator in sections:
            section_result = validator()
            result.errors.extend(section_result.errors)
            result.warnings.extend(section_result.warnings)
            result.info.extend(section_result.info)

            if not section_result.is_valid:
                result.is_valid = False

        for error in result.errors:
            self.logger.error(error)
        for warning in result.warnings:
            self.logger.warning(warning)
        return result

    def _validate_application(self) -> ValidationResult:
        """Validate application configuration"""
        result = ValidationResult(True, [], [], [])
        app_config = self.config.get_application_config()

        for field in ['name', 'version', 'environment']:
            if not app_config.get(field):
                result.errors.append(f"Application {field} is required")
                result.is_valid = False

        valid_environments = ['development', 'testing', 'production']
        env = app_config.get('environment', '')
        if env not in valid_environments:
            result.errors.append(f"Invalid environment: {env}. Must be one of: {valid_environments}")
            result.is_valid = False

        version = str(app_config.get('version', ''))
        if version and not re.match(r'^\d+\.\d+\.\d+$', version):
            result.warnings.append(f"Version format should be X.Y.Z (semver): {version}")

        result.info.append(f"Application: {app_config.get('name')} v{version} ({env})")
        return result

    def _validate_engine(self) -> ValidationResult:
        """Validate series engine defaults"""
        result = ValidationResult(True, [], [], [])
        engine = self.config.get_engine_config()

        if engine.enumeration_patience < 2:
            result.errors.append(
                f"engine.enumeration_patience must be >= 2: {engine.enumeration_patience}"
            )
            result.is_valid = False
        if engine.enumeration_max_steps < 1:
            result.errors.append(
                f"engine.enumeration_max_steps must be >= 1: {engine.enumeration_max_steps}"
            )
            result.is_valid = False

        if engine.default_order > 500:
            result.warnings.append(
                f"Default order {engine.default_order} makes lattice scans very slow"
            )
        cpus = os.cpu_count() or 1
        if engine.jobs > cpus:
            result.warnings.append(f"engine.jobs ({engine.jobs}) exceeds available CPUs ({cpus})")

        result.info.append(f"Default order: {engine.default_order}, jobs: {engine.jobs}")
        return result

    def _validate_cache(self) -> ValidationResult:
        """Validate the series cache directory"""
        result = ValidationResult(True, [], [], [])
        cache = self.config.get_cache_config()

        if not cache.enabled:
            result.info.append("Series cache disabled")
            return result

        directory = Path(cache.directory)
        if not directory.exists():
            try:
                directory.mkdir(parents=True)
                result.info.append(f"Created cache directory: {directory}")
            except OSError as e:
                result.errors.append(f"Cannot create cache directory: {e}")
                result.is_valid = False

        if directory.exists() and not os.access(directory, os.R_OK | os.W_OK):
            result.errors.append(f"No read/write access to cache directory: {directory}")
            result.is_valid = False

        result.info.append(f"Series cache: {directory}")
        return result

    def _validate_output(self) -> ValidationResult:
        """Validate report output settings"""
        result = ValidationResult(True, [], [], [])
        output = self.config.get_output_config()

        if output.format not in ('text', 'json'):
            result.errors.append(f"Invalid output format: {output.format}")
            result.is_valid = False

        return result

    def _validate_logging(self) -> ValidationResult:
        """Validate logging configuration"""
        result = ValidationResult(True, [], [], [])
        log_config = self.config.get_logging_config()

        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if log_config.level not in valid_levels:
            result.errors.append(f"Invalid log level: {log_config.level}")
            result.is_valid = False

        if log_config.file_enabled:
            log_path = Path(log_config.file_path)

            if not log_path.parent.exists():
                try:
                    log_path.parent.mkdir(parents=True)
                    result.info.append(f"Created log directory: {log_path.parent}")
                except OSError as e:
                    result.errors.append(f"Cannot create log directory: {e}")
                    result.is_valid = False

            if log_path.exists() and not os.access(log_path, os.W_OK):
                result.errors.append(f"No write access to log file: {log_path}")
                result.is_valid = False

            if log_config.file_backup_count < 0:
                result.errors.append(f"Log backup_count must be >= 0: {log_config.file_backup_count}")
                result.is_valid = False

        if log_config.console_level not in valid_levels:
            result.errors.append(f"Invalid console log level: {log_config.console_level}")
            result.is_valid = False

        for module, level in log_config.module_levels.items():
            if str(level).upper() not in valid_levels:
                result.warnings.append(f"Unknown level {level!r} for logger {module}")

        result.info.append(f"Logging level: {log_config.level}")
        return result


def validate_configuration() -> ValidationResult:
    """Main validation function"""
    return ConfigValidator().validate_all()


def format_validation_results(result: ValidationResult) -> str:
    """Validation results as a printable block"""
    lines = ["=" * 60, "CONFIGURATION VALIDATION RESULTS", "=" * 60]
    lines.append(f"Status: {'VALID' if result.is_valid else 'INVALID'}")

    for title, items in (("ERRORS", result.errors), ("WARNINGS", result.warnings), ("INFO", result.info)):
        if items:
            lines.append(f"\n{title} ({len(items)}):")
            lines.extend(f"  - {item}" for item in items)

    lines.append("=" * 60)
    return "\n".join(lines)
