"""
HeckMort - Configuration Manager
Handles loading and validation of configuration settings from YAML and environment files.
"""

import os
import yaml
from pathlib import Path
from typing import Dict, Any, Optional
from dataclasses import dataclass, replace
from dotenv import load_dotenv

from engine_errors import ConfigError


@dataclass(frozen=True)
class EngineConfig:
    """Series engine defaults"""
    default_order: int
    jobs: int
    enumeration_patience: int
    enumeration_max_steps: int


@dataclass(frozen=True)
class CacheConfig:
    """Series cache settings"""
    enabled: bool
    directory: str


@dataclass(frozen=True)
class OutputConfig:
    """Report output settings"""
    format: str
    reports_dir: str


@dataclass
class LoggingConfig:
    """Logging configuration settings"""
    level: str
    file_enabled: bool
    file_path: str
    file_max_size: str
    file_backup_count: int
    file_format: str
    console_enabled: bool
    console_level: str
    console_format: str
    module_levels: Dict[str, str]


@dataclass(frozen=True)
class RunConfig:
    """Per-invocation settings assembled from config file, environment and CLI flags"""
    order: int
    jobs: int = 1
    cache_enabled: bool = True
    cache_dir: Optional[str] = None
    output_format: str = "text"
    patience: int = 3
    max_steps: int = 100_000

    def validated(self) -> "RunConfig":
        if self.order < 1:
            raise ConfigError(f"Order must be a positive integer, got {self.order}")
        if self.jobs < 1:
            raise ConfigError(f"Jobs must be a positive integer, got {self.jobs}")
        if self.output_format not in ("text", "json"):
            raise ConfigError(f"Unknown output format: {self.output_format}")
        if self.patience < 2:
            raise ConfigError(f"Enumeration patience must be at least 2, got {self.patience}")
        if self.max_steps < 1:
            raise ConfigError(f"Enumeration step cap must be positive, got {self.max_steps}")
        return self

    def with_overrides(self, **changes: Any) -> "RunConfig":
        """Copy with the non-None keyword values applied"""
        return replace(self, **{k: v for k, v in changes.items() if v is not None}).validated()


class ConfigManager:
    """Main configuration manager for HeckMort"""

    def __init__(self, config_path: Optional[str] = None, env_path: Optional[str] = None):
        """
        Initialize the configuration manager

        Args:
            config_path: Path to the YAML configuration file
            env_path: Path to the .env environment file
        """
        self.project_root = Path(__file__).parent.parent
        self.config_path = Path(config_path) if config_path else self.project_root / "config" / "config.yaml"
        self.env_path = Path(env_path) if env_path else self.project_root / "config" / ".env"

        self._config_data: Dict[str, Any] = {}
        self._load_configuration()

    def _load_configuration(self) -> None:
        """Load configuration from YAML and environment files"""
        # Environment first so .env values can override YAML
        if self.env_path.exists():
            load_dotenv(self.env_path)

        if not self.config_path.exists():
            raise ConfigError(f"Configuration file not found: {self.config_path}")

        with open(self.config_path, 'r', encoding='utf-8') as file:
            try:
                self._config_data = yaml.safe_load(file) or {}
            except yaml.YAMLError as e:
                raise ConfigError(f"Malformed configuration file {self.config_path}: {e}") from e

        self._apply_environment_overrides()
        self._validate_configuration()

    def _apply_environment_overrides(self) -> None:
        """Apply environment variable overrides to configuration"""
        if 'engine' in self._config_data:
            engine = self._config_data['engine']
            engine['default_order'] = self._int_env('HECKMORT_ORDER', engine.get('default_order', 60))
            engine['jobs'] = self._int_env('HECKMORT_JOBS', engine.get('jobs', 1))

        if 'cache' in self._config_data:
            cache = self._config_data['cache']
            cache['directory'] = os.getenv('HECKMORT_CACHE_DIR', cache.get('directory'))

        if 'application' in self._config_data:
            app_config = self._config_data['application']
            app_config['environment'] = os.getenv('ENVIRONMENT', app_config.get('environment'))

        if 'logging' in self._config_data:
            log_config = self._config_data['logging']
            log_config['level'] = os.getenv('HECKMORT_LOG_LEVEL', log_config.get('level'))

    @staticmethod
    def _int_env(name: str, fallback: Any) -> int:
        raw = os.getenv(name)
        if raw is None:
            return fallback
        try:
            return int(raw)
        except ValueError as e:
            raise ConfigError(f"Environment variable {name} must be an integer, got {raw!r}") from e

    def _validate_configuration(self) -> None:
        """Validate the loaded configuration"""
        required_sections = ['application', 'engine', 'cache', 'output', 'logging']

        for section in required_sections:
            if section not in self._config_data:
                raise ConfigError(f"Missing required configuration section: {section}")

        engine = self._config_data['engine']
        if not isinstance(engine.get('default_order'), int) or engine['default_order'] < 1:
            raise ConfigError("engine.default_order must be a positive integer")
        if not isinstance(engine.get('jobs'), int) or engine['jobs'] < 1:
            raise ConfigError("engine.jobs must be a positive integer")

        self._create_required_directories()

    def validate_full(self) -> 'ValidationResult':
        """
        Perform comprehensive validation using ConfigValidator
        Returns ValidationResult object
        """
        # Import here to avoid circular imports
        from config_validator import ConfigValidator, ValidationResult

        try:
            validator = ConfigValidator(self)
            return validator.validate_all()
        except Exception as e:
            return ValidationResult(
                is_valid=False,
                errors=[f"Validation error: {e}"],
                warnings=[],
                info=[]
            )

    def _create_required_directories(self) -> None:
        """Create required directories if they don't exist"""
        directories = [self.project_root / "logs"]
        if self.get('output.reports_dir'):
            directories.append(self.project_root / self.get('output.reports_dir'))

        for directory in directories:
            try:
                directory.mkdir(parents=True, exist_ok=True)
            except OSError:
                # read-only installs still work with console logging only
                pass

    def get_engine_config(self) -> EngineConfig:
        """Get series engine configuration"""
        engine = self._config_data['engine']
        return EngineConfig(
            default_order=engine.get('default_order', 60),
            jobs=engine.get('jobs', 1),
            enumeration_patience=engine.get('enumeration_patience', 3),
            enumeration_max_steps=engine.get("enumeration_max_steps", 100_000)
        )

    def get_cache_config(self) -> CacheConfig:
        """Get series cache configuration"""
        cache = self._config_data['cache']
        directory = Path(cache.get('directory') or 'data/cache')
        if not directory.is_absolute():
            directory = self.project_root / directory
        return CacheConfig(enabled=bool(cache.get('enabled', True)), directory=str(directory))

    def get_output_config(self) -> OutputConfig:
        """Get report output configuration"""
        output = self._config_data['output']
        return OutputConfig(
            format=output.get('format', 'text'),
            reports_dir=str(self.project_root / output.get('reports_dir', 'data/reports'))
        )

    def get_logging_config(self) -> LoggingConfig:
        """Get logging configuration"""
        log_data = self._config_data['logging']
        file_data = log_data.get('file', {})
        console_data = log_data.get('console', {})
        modules_data = log_data.get('modules', {})

        return LoggingConfig(
            level=log_data['level'],
            file_enabled=file_data.get('enabled', False),
            file_path=str(self.project_root / file_data.get('path', 'logs/heckmort.log')),
            file_max_size=file_data.get('max_size', '10MB'),
            file_backup_count=file_data.get('backup_count', 5),
            file_format=file_data.get('format', '%(asctime)s - %(name)s - %(levelname)s - %(message)s'),
            console_enabled=console_data.get('enabled', True),
            console_level=console_data.get('level', 'WARNING'),
            console_format=console_data.get('format', '%(levelname)s: %(message)s'),
            module_levels=modules_data
        )

    def run_config(self) -> RunConfig:
        """Default per-invocation settings"""
        engine = self.get_engine_config()
        cache = self.get_cache_config()
        return RunConfig(
            order=engine.default_order,
            jobs=engine.jobs,
            cache_enabled=cache.enabled,
            cache_dir=cache.directory,
            output_format=self.get_output_config().format,
            patience=engine.enumeration_patience,
            max_steps=engine.enumeration_max_steps
        ).validated()

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by key (supports dot notation)"""
        keys = key.split('.')
        value = self._config_data

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def get_application_config(self) -> Dict[str, Any]:
        """Get application configuration"""
        return self._config_data.get('application', {})

    def is_development(self) -> bool:
        """Check if running in development environment"""
        return self.get('application.environment') == 'development'

    def reload(self) -> None:
        """Reload configuration from files"""
        self._load_configuration()


_config: Optional[ConfigManager] = None


def get_config() -> ConfigManager:
    """Get the global configuration instance, loading it on first use"""
    global _config
    if _config is None:
        _config = ConfigManager()
    return _config


if __name__ == "__main__":
    try:
        cfg = get_config()
        print("Configuration loaded successfully!")
        print(f"Environment: {cfg.get('application.environment')}")
        print(f"Default order: {cfg.get_engine_config().default_order}")
        print(f"Cache directory: {cfg.get_cache_config().directory}")
    except ConfigError as e:
        print(f"Configuration error: {e}")
