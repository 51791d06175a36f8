"""Logging configuration for effnet-mini"""

import logging
import os
from logging.config import dictConfig
from typing import Any, Dict, List

LOGGER_NAME = "effnet_mini"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_LOG_FILE = "effnet_mini.log"


def _handlers(log_level: int, log_file: str) -> Dict[str, Dict[str, Any]]:
    # stdout carries only report tables
    handlers: Dict[str, Dict[str, Any]] = {
        "console": {
            "class": "logging.StreamHandler",
            "level": log_level,
            "formatter": "standard",
            "stream": "ext://sys.stderr",
        },
    }
    if log_file:
        handlers["file"] = {
            "class": "logging.FileHandler",
            "level": log_level,
            "formatter": "standard",
            "filename": log_file,
            "mode": "a",
            "encoding": "utf-8",
        }
    return handlers


def configure_logging() -> logging.Logger:
    """Configure the effnet_mini logger from LOG_LEVEL and LOG_FILE.

    An empty LOG_FILE turns the file handler off. Unknown levels fall back to INFO with a warning.
    """
    log_level_name = os.environ.get("LOG_LEVEL", "INFO").strip().upper()
    log_level = logging.getLevelName(log_level_name)
    unknown_level = not isinstance(log_level, int)
    if unknown_level:
        log_level = logging.INFO

    handlers = _handlers(log_level, os.environ.get("LOG_FILE", DEFAULT_LOG_FILE).strip())
    handler_names: List[str] = list(handlers)
    dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {"standard": {"format": LOG_FORMAT}},
            "handlers": handlers,
            "loggers": {
                LOGGER_NAME: {"handlers": handler_names, "level": log_level, "propagate": False},
            },
        }
    )

    logger = logging.getLogger(LOGGER_NAME)
    if unknown_level:
        logger.warning(f"Unknown LOG_LEVEL '{log_level_name}', using INFO")
    logger.info(f"effnet-mini logging configured with level: {logging.getLevelName(log_level)}")
    return logger
