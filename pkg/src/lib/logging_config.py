"""
Logging for permupoly.

Every module logs through get_logger(__name__), under the "permupoly" root.
Commands call setup_logging once, with the level resolved from the config
file and the number of -v flags: stage timings of the symbolic pipelines
appear at INFO, resultant degrees and rewrite passes at DEBUG.
"""

import logging
import logging.handlers
from pathlib import Path
from typing import Optional

ROOT_LOGGER = "permupoly"

# -v, -vv
VERBOSITY_LEVELS = ("INFO", "DEBUG")

CONSOLE_FORMAT = "%(levelname)s: %(message)s"
FILE_FORMAT = "%(asctime)s %(levelname)-7s %(name)s:%(lineno)d %(message)s"


def resolve_level(configured: str, verbosity: int = 0) -> int:
    """
    Effective log level for a command.

    Args:
        configured: Level name from the config file; unknown names mean INFO
        verbosity: Number of -v flags; each one lowers the level a step

    Returns:
        A logging level constant, never above the configured one
    """
    level = logging.getLevelName(configured.upper())
    if not isinstance(level, int):
        level = logging.INFO
    if verbosity > 0:
        wanted = VERBOSITY_LEVELS[min(verbosity, len(VERBOSITY_LEVELS)) - 1]
        level = min(level, logging.getLevelName(wanted))
    return level


def setup_logging(
    level: int = logging.INFO,
    log_file: Optional[str] = None,
    max_size_mb: int = 10,
    backup_count: int = 3,
) -> logging.Logger:
    """
    Install the console handler and, if log_file is set, a rotating file.

    The console shows records at level and above on stderr, keeping stdout
    for command output. The file always records DEBUG.
    """
    root = logging.getLogger(ROOT_LOGGER)
    root.handlers.clear()
    root.propagate = False

    console = logging.StreamHandler()
    console.setLevel(level)
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    root.addHandler(console)

    if log_file:
        path = Path(log_file).expanduser()
        path.parent.mkdir(parents=True, exist_ok=True)
        rotating = logging.handlers.RotatingFileHandler(
            filename=path,
            maxBytes=max_size_mb * 1024 * 1024,
            backupCount=backup_count,
            encoding="utf-8",
        )
        rotating.setLevel(logging.DEBUG)
        rotating.setFormatter(logging.Formatter(FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
        root.addHandler(rotating)

    root.setLevel(logging.DEBUG if log_file else level)
    return root


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Logger under the permupoly root, e.g. get_logger(__name__)."""
    return logging.getLogger(f"{ROOT_LOGGER}.{name}" if name else ROOT_LOGGER)
