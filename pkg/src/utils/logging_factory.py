"""Logging Factory - Centralized logging configuration for the engine.

Every module obtains its logger through LoggingFactory.get_logger(__name__).
The command layer calls configure() once per run; console output goes to
stderr so that rendered tables on stdout stay byte-stable.
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import Dict, Optional


class LoggingFactory:
    """Centralized logging configuration factory."""

    _configured = False
    _loggers: Dict[str, logging.Logger] = {}
    _log_level = logging.INFO
    _log_dir = "logs"
    _log_file: Optional[str] = None
    _max_bytes = 5_000_000
    _backup_count = 3
    _current_command: Optional[str] = None

    @staticmethod
    def configure(
        level: str = "INFO",
        log_dir: str = "logs",
        log_file: Optional[str] = None,
        mode: Optional[str] = None,
        max_bytes: int = 5_000_000,
        backup_count: int = 3,
        clear_on_start: bool = True,
        to_file: bool = True,
    ) -> None:
        """Configure the logging system once at startup.

        Subsequent calls are ignored until reset() is called.

        Args:
            level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_dir: Directory for log files (created if missing)
            log_file: Name of log file. If None, uses "<mode>_run.log".
            mode: Command being run (pseries, homology, verify, ...)
            max_bytes: Max size of log file before rotation
            backup_count: Number of rotated files to keep
            clear_on_start: Truncate the log file at startup
            to_file: Attach the rotating file handler

        Example:
            LoggingFactory.configure(level="INFO", log_dir="logs", mode="homology")
            logger = LoggingFactory.get_logger(__name__)
        """
        if LoggingFactory._configured:
            return

        if log_file is None:
            log_file = f"{mode}_run.log" if mode else "bp_engine.log"

        LoggingFactory._log_level = getattr(logging, level.upper(), logging.INFO)
        LoggingFactory._log_dir = log_dir
        LoggingFactory._log_file = log_file
        LoggingFactory._max_bytes = max_bytes
        LoggingFactory._backup_count = backup_count
        LoggingFactory._current_command = mode

        root_logger = logging.getLogger()
        root_logger.setLevel(LoggingFactory._log_level)
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)

        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(LoggingFactory._log_level)
        console_handler.setFormatter(formatter)
        root_logger.addHandler(console_handler)

        if to_file:
            log_file_path = os.path.join(log_dir, log_file)
            try:
                os.makedirs(log_dir, exist_ok=True)
                if clear_on_start and os.path.exists(log_file_path):
                    open(log_file_path, "w", encoding="utf-8").close()
                file_handler = RotatingFileHandler(
                    log_file_path,
                    maxBytes=max_bytes,
                    backupCount=backup_count,
                    encoding="utf-8",
                )
                file_handler.setLevel(LoggingFactory._log_level)
                file_handler.setFormatter(formatter)
                root_logger.addHandler(file_handler)
            except OSError as e:
                root_logger.error("Failed to setup file handler: %s", e)

        LoggingFactory._configured = True

    @staticmethod
    def get_logger(name: str) -> logging.Logger:
        """Get a cached logger instance with the given name.

        Does not auto-configure; relies on the explicit configure() call in
        src.main before first output.

        Args:
            name: Logger name (typically __name__ of the calling module)

        Returns:
            Logger instance
        """
        if name in LoggingFactory._loggers:
            return LoggingFactory._loggers[name]

        logger = logging.getLogger(name)
        if LoggingFactory._configured:
            logger.setLevel(LoggingFactory._log_level)
        LoggingFactory._loggers[name] = logger
        return logger

    @staticmethod
    def set_level(level: str) -> None:
        """Change logging level for all loggers.

        Args:
            level: New logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        """
        log_level = getattr(logging, level.upper(), logging.INFO)
        LoggingFactory._log_level = log_level

        root_logger = logging.getLogger()
        root_logger.setLevel(log_level)
        for handler in root_logger.handlers:
            handler.setLevel(log_level)
        for logger in LoggingFactory._loggers.values():
            logger.setLevel(log_level)

    @staticmethod
    def get_configured() -> bool:
        """Check if logging has been configured."""
        return LoggingFactory._configured

    @staticmethod
    def reset() -> None:
        """Reset logging factory to unconfigured state (used by tests)."""
        root_logger = logging.getLogger()
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)
            handler.close()

        LoggingFactory._configured = False
        LoggingFactory._loggers.clear()
