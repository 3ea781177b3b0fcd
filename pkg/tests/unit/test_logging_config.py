"""Unit tests for logging configuration helpers."""

from __future__ import annotations

import logging
import logging.handlers
from pathlib import Path

import pytest

from src.lib.logging_config import ROOT_LOGGER, get_logger, resolve_level, setup_logging


@pytest.mark.parametrize(
    ("configured", "verbosity", "expected"),
    [
        ("INFO", 0, logging.INFO),
        ("warning", 0, logging.WARNING),
        ("WARNING", 1, logging.INFO),
        ("WARNING", 2, logging.DEBUG),
        ("ERROR", 5, logging.DEBUG),
        ("DEBUG", 1, logging.DEBUG),
        ("not-a-level", 0, logging.INFO),
    ],
)
def test_resolve_level(configured: str, verbosity: int, expected: int) -> None:
    assert resolve_level(configured, verbosity) == expected


def test_console_only_uses_the_resolved_level() -> None:
    logger = setup_logging(level=logging.WARNING)

    assert logger.level == logging.WARNING
    assert len(logger.handlers) == 1
    assert logger.handlers[0].level == logging.WARNING
    assert not logger.propagate


def test_log_file_records_debug_behind_a_quiet_console(tmp_path: Path) -> None:
    log_file = tmp_path / "logs" / "permupoly.log"

    logger = setup_logging(level=logging.WARNING, log_file=str(log_file), max_size_mb=2, backup_count=5)
    get_logger("src.services.symbolic.resultant").debug("resultant in y")
    for handler in logger.handlers:
        handler.flush()

    rotating = [h for h in logger.handlers if isinstance(h, logging.handlers.RotatingFileHandler)]
    assert len(rotating) == 1
    assert rotating[0].maxBytes == 2 * 1024 * 1024
    assert rotating[0].backupCount == 5
    assert logger.level == logging.DEBUG
    assert "resultant in y" in log_file.read_text(encoding="utf-8")


def test_setup_logging_replaces_existing_handlers() -> None:
    logging.getLogger(ROOT_LOGGER).handlers = [logging.NullHandler()]

    logger = setup_logging()

    assert not any(isinstance(h, logging.NullHandler) for h in logger.handlers)


def test_get_logger_names() -> None:
    assert get_logger("src.services.permcheck").name == "permupoly.src.services.permcheck"
    assert get_logger().name == "permupoly"
