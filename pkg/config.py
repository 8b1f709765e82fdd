#!/usr/bin/env python3
"""
This module configures layernet from environment variables and sets up
logging for the API, the CLI and the numerical services.

- Loads environment variables using dotenv.
- Exposes every tunable (tolerance defaults, database URLs, spiking
  conversion constants, quadrature settings) as a Config attribute.
- Provides a factory function that configures the root logger.

Classes:
    - Config: Centralized configuration class for application settings.

Functions:
    - setup_logging(level): Configures the root logger once and returns
      the package logger.
"""
from dotenv import load_dotenv
import logging
import os
import sys
from typing import Optional

# Load environment variables from .env
load_dotenv()


class Config:
    """Centralized app configuration."""
    # Flask settings
    JSONIFY_PRETTYPRINT_REGULAR = True
    API_HOST = os.getenv("API_HOST", "0.0.0.0")
    API_PORT = int(os.getenv("API_PORT", 5000))

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT = os.getenv(
        "LOG_FORMAT", "%(asctime)s - %(name)s - %(levelname)s - %(message)s")

    # Storage
    FLASK_ENV = os.getenv("FLASK_ENV", "development")
    DATABASE_URL = os.getenv("DATABASE_URL", "sqlite:///layernet.db")
    DATABASE_TEST_URL = os.getenv("DATABASE_TEST_URL", "sqlite://")

    # Construction defaults
    DEFAULT_BETA = float(os.getenv("DEFAULT_BETA", 0.5))
    DEFAULT_KAPPA = float(os.getenv("DEFAULT_KAPPA", 1.0))

    # Spiking conversion
    SNN_DELTA = float(os.getenv("SNN_DELTA", 0.1))
    SNN_BOUND = float(os.getenv("SNN_BOUND", 10.0))
    SNN_RANGE_MAX_PIECES = int(os.getenv("SNN_RANGE_MAX_PIECES", 65536))
    SNN_RANGE_MARGIN = float(os.getenv("SNN_RANGE_MARGIN", 1e-2))
    SNN_RANGE_SAMPLES = int(os.getenv("SNN_RANGE_SAMPLES", 20001))

    # Norms and studies
    QUADRATURE_ORDER = int(os.getenv("QUADRATURE_ORDER", 12))
    QUADRATURE_MAX_PANELS = int(os.getenv("QUADRATURE_MAX_PANELS", 60))
    QUADRATURE_RTOL = float(os.getenv("QUADRATURE_RTOL", 1e-9))
    QUADRATURE_NOISE_ULPS = float(os.getenv("QUADRATURE_NOISE_ULPS", 64))
    LINF_SAMPLES = int(os.getenv("LINF_SAMPLES", 1000))
    RATE_FLOOR = float(os.getenv("RATE_FLOOR", 1e-13))
    DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", 0))
    DEFAULT_JOBS = int(os.getenv("DEFAULT_JOBS", 1))


def setup_logging(level: Optional[str] = None) -> logging.Logger:
    """
    Configures the root logger with a stream handler on stderr.

    stdout is left to CLI payloads (CSV/JSON tables). Calling this more
    than once only updates the level.

    Args:
        level (str, optional): Logging level name; defaults to
            Config.LOG_LEVEL.

    Returns:
        logging.Logger: The "layernet" logger.
    """
    level_name = (level or Config.LOG_LEVEL).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format=Config.LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)]
    )
    logging.getLogger().setLevel(getattr(logging, level_name, logging.INFO))
    return logging.getLogger("layernet")
