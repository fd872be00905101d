"""Logger utility following DRY principle."""

import logging
import sys
from typing import Optional, TextIO

from common.config.constants import AppConstants


class LoggerUtils:
    """Builds the workbench loggers with the central format."""

    @staticmethod
    def stream_handler(level: int, stream: Optional[TextIO] = None) -> logging.Handler:
        """Handler writing formatted records to ``stream`` (stderr by default)."""
        handler = logging.StreamHandler(stream or sys.stderr)
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter(AppConstants.LOG_FORMAT, datefmt=AppConstants.LOG_DATE_FORMAT))
        return handler

    @staticmethod
    def setup_logger(name: str, level: int = logging.INFO, stream: Optional[TextIO] = None) -> logging.Logger:
        """
        Create or reconfigure the logger ``name``.

        Existing handlers are replaced so repeated CLI invocations in one
        process do not duplicate lines. Stdout is reserved for JSON output.

        Args:
            name: Logger name
            level: Logging level
            stream: Output stream, stderr when omitted

        Returns:
            Configured logger instance
        """
        logger = logging.getLogger(name)
        logger.setLevel(level)
        logger.handlers = [LoggerUtils.stream_handler(level, stream)]
        logger.propagate = False
        return logger

    @staticmethod
    def propagate_to(logger: logging.Logger, *names: str):
        """Give the package loggers ``names`` the level and handlers of ``logger``."""
        for logger_name in names:
            child = logging.getLogger(logger_name)
            child.setLevel(logger.level)
            child.handlers = list(logger.handlers)
            child.propagate = False
