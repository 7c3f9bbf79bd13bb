"""
HeckMort - Logging Setup Module
Configures logging for the engine and the CLI based on configuration settings.
"""

import functools
import logging
import logging.handlers
import sys
import time
from pathlib import Path
from typing import Optional


def parse_log_size(size_str: str) -> int:
    """
    Parse log file size string (e.g., '10MB', '1GB') to bytes

    Args:
        size_str: Size string like '10MB', '1GB', etc.

    Returns:
        Size in bytes
    """
    size_str = size_str.upper()

    if size_str.endswith('KB'):
        return int(size_str[:-2]) * 1024
    elif size_str.endswith('MB'):
        return int(size_str[:-2]) * 1024 * 1024
    elif size_str.endswith('GB'):
        return int(size_str[:-2]) * 1024 * 1024 * 1024
    else:
        # bytes
        return int(size_str)


def setup_logging(verbosity: int = 0, console_level: Optional[str] = None) -> logging.Logger:
    """
    Set up logging from the configuration file

    Console output goes to stderr so stdout stays reserved for reports.

    Args:
        verbosity: -1 quiet, 0 configured level, 1 info, 2 debug
        console_level: explicit console level, overrides verbosity

    Returns:
        Configured root logger
    """
    from config_manager import get_config

    log_config = get_config().get_logging_config()

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, log_config.level.upper()))
    root_logger.handlers.clear()

    if log_config.file_enabled:
        log_path = Path(log_config.file_path)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        max_bytes = parse_log_size(log_config.file_max_size)
        file_handler = logging.handlers.RotatingFileHandler(
            log_config.file_path,
            maxBytes=max_bytes,
            backupCount=log_config.file_backup_count,
            encoding='utf-8'
        )
        file_handler.setFormatter(logging.Formatter(log_config.file_format))
        root_logger.addHandler(file_handler)

    if log_config.console_enabled:
        if console_level is None:
            console_level = {
                -1: 'ERROR', 1: 'INFO', 2: 'DEBUG'
            }.get(max(-1, min(verbosity, 2)), log_config.console_level)
        if logging.getLevelName(console_level.upper()) < root_logger.level:
            root_logger.setLevel(console_level.upper())
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(getattr(logging, console_level.upper()))
        console_handler.setFormatter(logging.Formatter(log_config.console_format))
        root_logger.addHandler(console_handler)

    for module_name, level in log_config.module_levels.items():
        logging.getLogger(module_name).setLevel(getattr(logging, level.upper()))

    logger = logging.getLogger(__name__)
    logger.debug("Logging system initialized")
    logger.debug(f"Log level: {log_config.level}, console: {console_level}")
    logger.debug(f"File logging: {'enabled' if log_config.file_enabled else 'disabled'}")

    return root_logger


def get_logger(name: str = None) -> logging.Logger:
    """
    Get a logger instance with the given name

    Args:
        name: Logger name (defaults to caller's module)

    Returns:
        Logger instance
    """
    if name is None:
        frame = sys._getframe(1)
        name = frame.f_globals.get('__name__', 'unknown')

    return logging.getLogger(name)


class LoggerMixin:
    """Mixin class to add logging capabilities to any class"""

    @property
    def logger(self) -> logging.Logger:
        """Get logger for this class"""
        return get_logger(f"{self.__class__.__module__}.{self.__class__.__name__}")


def log_execution_time(func):
    """Decorator to log function execution time at debug level"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = get_logger(func.__module__)
        start_time = time.perf_counter()
        try:
            result = func(*args, **kwargs)
            logger.debug(f"{func.__name__} executed in {time.perf_counter() - start_time:.4f} seconds")
            return result
        except Exception as e:
            logger.debug(f"{func.__name__} failed after {time.perf_counter() - start_time:.4f} seconds: {e}")
            raise
    return wrapper
