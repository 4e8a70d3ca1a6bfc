"""Error Handler - Centralized error handling for engine operations.

Defines the exception hierarchy raised by the exact-arithmetic engine and a
severity-based handler used by the command layer and the result cache.
Invariant violations (a wrongly assembled complex, a non-integral p-series)
are CRITICAL; contract violations by the caller are WARNING; cache and file
system problems are RECOVERABLE and degrade to recomputation.
"""

import json
import sqlite3
from enum import Enum
from typing import Any, Callable, Optional

from src.utils.logging_factory import LoggingFactory


class ErrorSeverity(Enum):
    """Error severity levels for consistent handling and response."""

    RECOVERABLE = "recoverable"  # Retry automatically or fallback
    WARNING = "warning"  # Log but continue execution
    CRITICAL = "critical"  # Log and stop, may raise
    IGNORE = "ignore"  # Silent, no logging


class EngineError(Exception):
    """Base exception for engine errors with severity level."""

    severity_default = ErrorSeverity.WARNING
    usage_error = False

    def __init__(self, message: str, severity: Optional[ErrorSeverity] = None):
        """Initialize engine error with message and severity.

        Args:
            message: Error description
            severity: ErrorSeverity level for this error (class default if None)
        """
        self.message = message
        self.severity = severity or self.severity_default
        super().__init__(message)


class DimensionMismatchError(EngineError):
    """Vector or matrix shapes disagree."""

    severity_default = ErrorSeverity.CRITICAL


class ComposabilityError(EngineError):
    """B·A is nonzero, or a span is not contained where it must be."""

    severity_default = ErrorSeverity.CRITICAL


class DegreeBoundError(EngineError):
    """Requested degree lies outside the valid window."""

    usage_error = True


class AssemblyError(EngineError):
    """A chain complex failed its assembly checks."""

    severity_default = ErrorSeverity.CRITICAL


class IntegralityError(EngineError):
    """A coefficient that must lie in Z_(p) has negative p-valuation."""

    severity_default = ErrorSeverity.CRITICAL


class PreconditionError(EngineError):
    """An operation was called outside its contract."""

    usage_error = True


class ConjecturalPrimeError(EngineError):
    """p = 2 requested on a command that needs the conjecture-probe flag."""

    usage_error = True


class MalformedMapError(EngineError):
    """Invalid algebra map specification or pullback input."""

    usage_error = True


class CacheAuditError(EngineError):
    """A recomputed payload differs from the cached bytes."""

    severity_default = ErrorSeverity.CRITICAL


class UsageError(EngineError):
    """Invalid command-line configuration."""

    usage_error = True


class ErrorHandler:
    """Centralized error handler for engine operations.

    Maps error types to severity levels and provides consistent error handling
    across the command layer and the result cache.
    """

    # Error type to (severity, description) mapping
    ERROR_MAP = {
        ValueError: (ErrorSeverity.WARNING, "Invalid parameters"),
        KeyError: (ErrorSeverity.CRITICAL, "Missing configuration"),
        OSError: (ErrorSeverity.RECOVERABLE, "System I/O error"),
        PermissionError: (ErrorSeverity.RECOVERABLE, "Cache directory not writable"),
        sqlite3.Error: (ErrorSeverity.RECOVERABLE, "Cache database error"),
        json.JSONDecodeError: (ErrorSeverity.RECOVERABLE, "Corrupt cache payload"),
        TypeError: (ErrorSeverity.WARNING, "Type mismatch"),
    }

    @staticmethod
    def classify(error: Exception) -> ErrorSeverity:
        """Return the severity for an error instance.

        EngineError instances carry their own severity; other exceptions are
        looked up along their MRO in ERROR_MAP.
        """
        if isinstance(error, EngineError):
            return error.severity
        for error_type in type(error).__mro__:
            if error_type in ErrorHandler.ERROR_MAP:
                return ErrorHandler.ERROR_MAP[error_type][0]
        return ErrorSeverity.WARNING

    @staticmethod
    def handle_error(
        error: Exception,
        context: str = "",
        retry_func: Optional[Callable] = None,
    ) -> Any:
        """Handle an error with appropriate logging and recovery.

        Args:
            error: The exception that occurred
            context: Where the error happened (e.g., "cache_get")
            retry_func: Optional function to call for recovery on RECOVERABLE errors

        Returns:
            Result of retry_func if recovery ran, otherwise None

        Raises:
            EngineError: For CRITICAL errors (the original is re-raised when it
                already is an EngineError)

        Example:
            try:
                payload = cache.get(key)
            except sqlite3.Error as e:
                payload = ErrorHandler.handle_error(
                    e, context="cache_get", retry_func=compute
                )
        """
        severity = ErrorHandler.classify(error)
        default_msg = "Unknown error"
        for error_type in type(error).__mro__:
            if error_type in ErrorHandler.ERROR_MAP:
                default_msg = ErrorHandler.ERROR_MAP[error_type][1]
                break

        error_msg = str(error) if str(error) else default_msg
        full_msg = f"{context}: {error_msg}" if context else error_msg

        logger = LoggingFactory.get_logger(__name__)

        if severity == ErrorSeverity.RECOVERABLE:
            logger.warning("[RECOVERABLE] %s", full_msg)
            if retry_func:
                logger.info("[RECOVERY] Recomputing without cache")
                return retry_func()
            return None

        if severity == ErrorSeverity.WARNING:
            logger.warning("[WARNING] %s", full_msg)
            return None

        if severity == ErrorSeverity.CRITICAL:
            logger.critical("[CRITICAL] %s", full_msg)
            if isinstance(error, EngineError):
                raise error
            raise EngineError(full_msg, severity) from error

        return None

    @staticmethod
    def handle_validation_error(
        field: str, value: Any, expected_type: str = "", context: str = ""
    ) -> bool:
        """Handle validation errors for common cases.

        Args:
            field: Name of field that failed validation
            value: The invalid value
            expected_type: Expected type/format
            context: Where validation failed

        Returns:
            False (always fails validation)
        """
        msg = f"Validation failed for {field}"
        if expected_type:
            msg += f" (expected {expected_type})"
        if context:
            msg += f" in {context}"
        msg += f": {value}"

        logger = LoggingFactory.get_logger(__name__)
        logger.warning("[VALIDATION] %s", msg)
        return False

    @staticmethod
    def log_error_summary(
        fail_count: int = 0,
        warning_count: int = 0,
        pass_count: int = 0,
        operation: str = "",
    ) -> None:
        """Log a summary of verdicts encountered during an operation.

        Args:
            fail_count: Number of FAIL cells
            warning_count: Number of VACUOUS or INCONCLUSIVE cells
            pass_count: Number of PASS cells
            operation: Name of operation being summarized
        """
        logger = LoggingFactory.get_logger(__name__)
        name = operation or "Operation"

        if fail_count > 0:
            logger.error("[SUMMARY] %s: %d FAIL cells", name, fail_count)
        elif warning_count > 0:
            logger.warning(
                "[SUMMARY] %s: %d passed, %d vacuous or inconclusive",
                name,
                pass_count,
                warning_count,
            )
        else:
            logger.info("[SUMMARY] %s: all %d cells passed", name, pass_count)

    @staticmethod
    def should_retry(error: Exception) -> bool:
        """Determine if an error is recoverable by recomputation.

        Args:
            error: The exception to evaluate

        Returns:
            True if error is recoverable, False otherwise
        """
        return ErrorHandler.classify(error) == ErrorSeverity.RECOVERABLE
