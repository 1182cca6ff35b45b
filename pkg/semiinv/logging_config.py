"""
Logging configuration module for semiinv

Provides a centralized logger wrapper with a rich console handler on standard
error, optional rotating file handlers, exception diagnostics and performance
timing.
"""

import logging
import logging.handlers
import traceback
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

# Standard output carries command results; diagnostics go to stderr.
_stderr_console = Console(stderr=True)


class SemiInvLogger:
    """
    Named logger with a rich console handler and, when a log directory is
    given, a rotating file log plus an errors-only file.
    """

    def __init__(self, name: str, log_dir: Optional[Path] = None, verbose: bool = False):
        self.name = name
        self.log_dir = Path(log_dir) if log_dir else None

        self.logger = logging.getLogger(name)
        self.logger.setLevel(logging.DEBUG if verbose else logging.INFO)

        # Prevent duplicate handlers
        if self.logger.handlers:
            return

        console_handler = RichHandler(
            console=_stderr_console, show_path=False, rich_tracebacks=False
        )
        console_handler.setLevel(logging.DEBUG if verbose else logging.WARNING)
        self.logger.addHandler(console_handler)

        if self.log_dir is None:
            return

        self.log_dir.mkdir(exist_ok=True, parents=True)
        detailed_formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s"
        )

        file_handler = logging.handlers.RotatingFileHandler(
            self.log_dir / f"{name}.log",
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(detailed_formatter)
        self.logger.addHandler(file_handler)

        error_handler = logging.FileHandler(self.log_dir / f"{name}_errors.log")
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(detailed_formatter)
        self.logger.addHandler(error_handler)

    def set_verbose(self, verbose: bool) -> None:
        level = logging.DEBUG if verbose else logging.INFO
        self.logger.setLevel(level)
        for handler in self.logger.handlers:
            if isinstance(handler, RichHandler):
                handler.setLevel(logging.DEBUG if verbose else logging.WARNING)

    def log_exception(self, exception: Exception, context: str = "") -> None:
        """Log exception with full stack trace."""
        self.logger.error(f"{context}: {exception}")
        self.logger.debug(f"Full traceback for {context}: {traceback.format_exc()}")

    def log_performance(self, operation: str, duration: float) -> None:
        """Log performance metrics."""
        self.logger.info(f"⏱️  {operation} completed in {duration:.3f} seconds")

    def debug(self, msg: str) -> None:
        self.logger.debug(msg)

    def info(self, msg: str) -> None:
        self.logger.info(msg)

    def warning(self, msg: str) -> None:
        self.logger.warning(msg)

    def error(self, msg: str) -> None:
        self.logger.error(msg)

    def critical(self, msg: str) -> None:
        self.logger.critical(msg)


def get_logger(
    name: str, log_dir: Optional[Path] = None, verbose: bool = False
) -> SemiInvLogger:
    """Get or create a logger instance."""
    return SemiInvLogger(name, log_dir=log_dir, verbose=verbose)
