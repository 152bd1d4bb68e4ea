"""Logging for the command-line toolkit.

Reports go to stdout; everything logged here goes to stderr so that
``analyze`` and ``reproduce-table`` output stays machine readable.
"""

from __future__ import annotations

import copy
import logging
import logging.config
from functools import lru_cache
from typing import Union

from app.errors import InvalidArgumentError

LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

_LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "cli": {"format": "%(levelname)s %(name)s: %(message)s"},
        "debug": {
            "format": "%(asctime)s | %(levelname)s | %(threadName)s | %(name)s:%(lineno)d | %(message)s",
            "datefmt": "%H:%M:%S",
        },
    },
    "handlers": {
        "stderr": {
            "class": "logging.StreamHandler",
            "formatter": "cli",
            "stream": "ext://sys.stderr",
        }
    },
    "loggers": {
        # numpy overflow and pandas deprecation warnings
        "py.warnings": {"level": "WARNING"},
    },
    "root": {"handlers": ["stderr"], "level": "INFO"},
}


def resolve_level(level: Union[int, str, None]) -> str:
    """Normalise ``--log-level`` / ``POLAR_LOG_LEVEL`` to a level name."""
    if level is None or level == "":
        return "INFO"
    if isinstance(level, int):
        name = logging.getLevelName(level)
    else:
        name = str(level).strip().upper()
    if name == "WARN":
        name = "WARNING"
    if name not in LEVELS:
        raise InvalidArgumentError(f"unknown log level '{level}'; expected one of {', '.join(LEVELS)}")
    return name


@lru_cache(maxsize=1)
def configure_logging(level: Union[int, str, None] = None) -> str:
    """Install the stderr handler once per level and return the level in effect."""
    name = resolve_level(level)
    config = copy.deepcopy(_LOGGING_CONFIG)
    config["root"]["level"] = name
    if name == "DEBUG":
        config["handlers"]["stderr"]["formatter"] = "debug"
    logging.config.dictConfig(config)
    logging.captureWarnings(True)
    return name


__all__ = ["LEVELS", "configure_logging", "resolve_level"]
