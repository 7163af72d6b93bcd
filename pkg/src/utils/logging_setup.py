"""
Logging setup.

Why this exists:
- Replaces ad-hoc print statements with structured logs.
- Keeps diagnostics on stderr (and optionally a log file) so the reports on
  stdout stay byte-identical between runs.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

from .io import ensure_dir

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"


def setup_logger(
    name: str,
    log_dir: Path | None = None,
    log_file: str | None = None,
    level: int | str = logging.INFO,
) -> logging.Logger:
    """
    Create a console (stderr) logger, plus a file handler when log_dir is given.

    Args:
        name: Logger name. "src" captures every library module.
        log_dir: Directory to store the log file (None = console only).
        log_file: Log filename (defaults to "<name>.log").
        level: Logging level (default INFO).

    Returns:
        A configured logger.
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)
    logger.propagate = False

    # If already configured, do not add handlers again.
    # This avoids duplicated lines if setup_logger is called twice in one process.
    if getattr(logger, "_is_configured", False):
        for h in logger.handlers:
            h.setLevel(level)
        return logger

    fmt = logging.Formatter(LOG_FORMAT)

    # Console handler
    ch = logging.StreamHandler(sys.stderr)
    ch.setLevel(level)
    ch.setFormatter(fmt)
    logger.addHandler(ch)

    # File handler
    if log_dir is not None:
        ensure_dir(log_dir)
        fh = logging.FileHandler(log_dir / (log_file or f"{name}.log"), mode="a", encoding="utf-8")
        fh.setLevel(level)
        fh.setFormatter(fmt)
        logger.addHandler(fh)

    logger._is_configured = True  # type: ignore[attr-defined]
    return logger
