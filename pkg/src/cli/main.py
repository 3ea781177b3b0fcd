"""
Main CLI entry point for permupoly.

Aggregates all commands and provides the primary interface.
"""

import sys
from pathlib import Path
from typing import Optional

import click

from src import __version__
from src.cli.count_cpp_command import count_cpp
from src.cli.derive_command import derive
from src.cli.init_command import init_config
from src.cli.pipeline_command import pipeline
from src.cli.search_command import search_command
from src.cli.sweep_command import sweep
from src.cli.table2_command import table2
from src.cli.validate_config_command import validate_config
from src.cli.verify_command import verify
from src.lib.logging_config import get_logger

logger = get_logger(__name__)


@click.group(invoke_without_command=True)
@click.version_option(version=__version__, prog_name='permupoly')
@click.option('--verbose', '-v', count=True, help='-v logs pipeline stages (INFO), -vv resultant details (DEBUG)')
@click.option(
    '--config',
    'config_path',
    type=click.Path(dir_okay=False),
    default=None,
    help='Config file (default: ~/.config/permupoly/config.yaml)',
)
@click.pass_context
def cli(ctx: click.Context, verbose: int, config_path: Optional[str]) -> None:
    """
    permupoly - permutation polynomials over F_{q^3}.

    Verifies, searches and re-derives the nine families of permutation
    polynomials built from the exponents q^2+q-1, q^2-q+1, q^3-q^2+q,
    q^2, q and 1.

    Examples:

        \b
        # First-time setup
        permupoly init

        \b
        # Exhaustive checks
        permupoly table2
        permupoly verify --field 5^1 --family T36 --coeffs '{"A":1,"B":2,"C":3}'
        permupoly count-cpp --field 7^1

        \b
        # Symbolic re-derivation
        permupoly derive --theorem T34
        permupoly pipeline --theorem T31
    """
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose
    if config_path:
        ctx.obj["config_path"] = Path(config_path).expanduser()
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


cli.add_command(verify)
cli.add_command(search_command)
cli.add_command(sweep)
cli.add_command(count_cpp)
cli.add_command(derive)
cli.add_command(pipeline)
cli.add_command(table2)
cli.add_command(init_config)
cli.add_command(validate_config)


def main() -> None:
    """Main entry point for the CLI."""
    try:
        cli(obj={})
    except KeyboardInterrupt:
        click.echo("\n\nInterrupted by user.", err=True)
        sys.exit(130)
    except Exception as e:
        logger.error(f"Unhandled exception in CLI: {e}", exc_info=True)
        click.echo(f"\n❌ Error: {e}", err=True)
        sys.exit(2)


if __name__ == '__main__':
    main()
