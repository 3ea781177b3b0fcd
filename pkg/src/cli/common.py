"""
Shared plumbing for permupoly commands.

Builds the configured services, resolves budgets, and writes RunRecords in
JSON or text form. Exit codes: 0 success, 1 verified-false, 2 usage or
precondition error.
"""

import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, NoReturn, Optional

import click

from src import __version__
from src.lib.exceptions import PermupolyError
from src.lib.logging_config import get_logger, resolve_level, setup_logging
from src.models.entities import Configuration, RunRecord
from src.services.config_manager import ConfigurationManager
from src.services.result_cache import ResultCache
from src.services.tower import Tower, make_tower, parse_field_spec

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2

SEPARATOR = "=" * 80


@dataclass
class Runtime:
    """Configured services for one command invocation."""
    config_manager: ConfigurationManager
    config: Configuration
    cache: ResultCache
    enumeration_budget: int
    search_budget: int

    def build_tower(self, field_spec: str) -> Tower:
        return make_tower(parse_field_spec(field_spec), self.enumeration_budget)


def get_runtime(ctx: click.Context, budget: Optional[int] = None) -> Runtime:
    """
    Load configuration, set up logging and resolve budgets.

    Raises:
        ConfigurationError: If the config file or PERMUPOLY_BUDGET is invalid
    """
    verbosity = int((ctx.obj or {}).get("verbose") or 0) if ctx is not None else 0
    config_manager = ConfigurationManager((ctx.obj or {}).get("config_path") if ctx is not None else None)
    config = config_manager.load_config()

    setup_logging(
        level=resolve_level(config.logging.level, verbosity),
        log_file=config.logging.file or None,
        max_size_mb=config.logging.max_size_mb,
        backup_count=config.logging.backup_count,
    )

    return Runtime(
        config_manager=config_manager,
        config=config,
        cache=ResultCache(directory=config.cache.directory, enabled=config.cache.enabled),
        enumeration_budget=config_manager.resolve_budget("enumeration", budget),
        search_budget=config_manager.resolve_budget("search", budget),
    )


def fail(error: PermupolyError) -> NoReturn:
    """Report a usage or precondition error and exit 2."""
    logger.debug(f"Command failed: {error.message}")
    click.echo(click.style(f"❌ Error: {error.message}", fg='red'), err=True)
    if error.troubleshooting:
        click.echo(f"\nTroubleshooting:\n{error.troubleshooting}", err=True)
    sys.exit(EXIT_USAGE)


def fail_unexpected(command: str, error: Exception) -> NoReturn:
    logger.error(f"Unexpected error in {command}: {error}", exc_info=True)
    click.echo(click.style(f"❌ Unexpected error: {error}", fg='red'), err=True)
    sys.exit(EXIT_USAGE)


def output_options(func: Callable) -> Callable:
    """--format and --out, shared by every computing command."""
    func = click.option(
        '--out',
        type=click.Path(dir_okay=False),
        default=None,
        help='Also write the JSON run record to this file',
    )(func)
    func = click.option(
        '--format',
        'output_format',
        type=click.Choice(['json', 'text']),
        default='text',
        show_default=True,
        help='Output format',
    )(func)
    return func


def budget_option(func: Callable) -> Callable:
    return click.option(
        '--budget',
        type=click.IntRange(min=1),
        default=None,
        help='Enumeration and search budget (overrides PERMUPOLY_BUDGET and config)',
    )(func)


class Stopwatch:
    """Wall-clock timer for RunRecord.duration_seconds."""

    def __init__(self) -> None:
        self.start = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start


def make_record(
    request: Dict[str, Any],
    results: Dict[str, Any],
    stopwatch: Stopwatch,
    tower: Optional[Tower] = None,
) -> RunRecord:
    return RunRecord(
        request=request,
        version=__version__,
        tower=tower.to_dict() if tower is not None else {},
        results=results,
        duration_seconds=stopwatch.elapsed,
    )


def record_json(record: RunRecord) -> str:
    return json.dumps(record.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)


def emit(
    record: RunRecord,
    output_format: str,
    out: Optional[str],
    render_text: Callable[[RunRecord], None],
) -> None:
    """Print the record in the chosen format; --out always receives JSON."""
    if output_format == 'json':
        click.echo(record_json(record))
    else:
        render_text(record)
    if out:
        path = Path(out).expanduser()
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(record_json(record) + "\n", encoding='utf-8')
        logger.info(f"Run record written to {path}")


def header(title: str) -> None:
    click.echo(click.style(f"\n{title}", fg='cyan', bold=True))
    click.echo(SEPARATOR)


def status(passed: bool) -> str:
    return click.style("✓ pass", fg='green') if passed else click.style("✗ fail", fg='red')


def render_conditions(conditions: Dict[str, Any]) -> None:
    """Condition rows with the printed labels."""
    for row in conditions["rows"]:
        line = f"  {status(row['passed'])}  {row['label']}"
        if "witness" in row:
            line += f"  (witness {row['witness']})"
        if row.get("note"):
            line += f"  [{row['note']}]"
        click.echo(line)


def render_verdict(label: str, verdict: Dict[str, Any]) -> None:
    line = f"  {status(verdict['is_permutation'])}  {label} ({verdict['elements_checked']} elements)"
    click.echo(line)
    if "counterexample" in verdict:
        first, second = verdict["counterexample"]
        click.echo(f"      collision: {first} and {second}")
