# semiinv/config.py
"""
Configuration module for semiinv

Settings govern logging, the seed used for randomized certificates (such as
Jacobian sample points) and optional extra verification. They never change
the exact results of an operation.

All settings can be overridden via SEMIINV_* environment variables or a .env
file.
"""

from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

from .logging_config import get_logger


class Settings(BaseSettings):
    """
    Configuration for the semiinv library and command line.

    - Logging: optional log directory for rotating file logs, verbosity
    - Sampling: seed and numerator range for random rational points
    - Verification: optional re-check of canonical decompose denominators
    """

    # Logging
    log_dir: Optional[Path] = None  # file logging is off unless a directory is given
    verbose: bool = False

    # Randomized certificates (Jacobian rank at a sample point)
    random_seed: int = 20240917
    sample_range: int = 10**6  # numerators drawn from [1, sample_range]

    # Decompose: confirm the minimal denominator with the membership oracle
    verify_minimal_denominator: bool = False

    model_config = SettingsConfigDict(
        env_prefix="SEMIINV_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="allow",
    )


settings = Settings()

# Package logger; library modules log through child loggers of "semiinv"
logger = get_logger("semiinv", log_dir=settings.log_dir, verbose=settings.verbose)

logger.debug("⚙️  semiinv configuration initialized")
logger.debug(f"🎲 Random seed: {settings.random_seed} (sample range {settings.sample_range})")
logger.debug(f"📁 Log directory: {settings.log_dir or 'disabled'}")
