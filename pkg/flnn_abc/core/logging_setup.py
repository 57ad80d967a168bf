# flnn_abc/core/logging_setup.py
import logging
import sys

ROOT_LOGGER = "flnn_abc"


def configure_logging(verbosity: int = 0) -> logging.Logger:
    """
    Attach a single stderr handler to the package logger.

    verbosity: -1 quiet (WARNING), 0 default (INFO), 1 verbose (DEBUG).
    """
    level = {-1: logging.WARNING, 0: logging.INFO}.get(verbosity, logging.DEBUG)
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(level)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))

    logger.handlers.clear()
    logger.addHandler(handler)
    return logger
