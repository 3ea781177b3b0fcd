"""
sweep CLI command implementation.

Runs a soundness sweep: every tuple passing the hypotheses must permute.
"""

from typing import Optional

import click

from src.cli.common import (
    EXIT_FALSE,
    EXIT_OK,
    SEPARATOR,
    Stopwatch,
    budget_option,
    emit,
    fail,
    fail_unexpected,
    get_runtime,
    header,
    make_record,
    output_options,
    status,
)
from src.lib.exceptions import PermupolyError
from src.lib.logging_config import get_logger
from src.models.entities import FAMILY_IDS, RunRecord
from src.services.permcheck import soundness_sweep

logger = get_logger(__name__)


def _render(record: RunRecord) -> None:
    report = record.results
    header(f"permupoly sweep: {report['family']} over {report['tower']}")
    click.echo(f"Tuples visited:           {report['tuples_total']}")
    click.echo(f"Pass the hypotheses:      {report['tuples_passing_conditions']}")
    click.echo(f"  ... and permute:        {report['tuples_condition_pass_and_permutation']}")
    for entry in report["passing"]:
        click.echo(f"  {status(entry['is_permutation'])}  {entry['coeffs']}")
    click.echo(SEPARATOR)
    if report["violations"]:
        click.echo(click.style(f"{len(report['violations'])} violation(s)", fg='red', bold=True))
        for entry in report["violations"]:
            click.echo(f"  {entry['coeffs']}: collision {entry['counterexample']}")
    else:
        click.echo(click.style("No violations", fg='green', bold=True))
    click.echo()


@click.command(name='sweep')
@click.option('--field', 'field_spec', required=True, help="Field spec, e.g. '5^1'")
@click.option('--family', required=True, type=click.Choice(FAMILY_IDS), help='Family id')
@click.option(
    '--workers',
    type=click.IntRange(min=0),
    default=None,
    help='Worker processes (0 = available parallelism, 1 = sequential; default from config)',
)
@budget_option
@output_options
@click.pass_context
def sweep(
    ctx: click.Context,
    field_spec: str,
    family: str,
    workers: Optional[int],
    budget: Optional[int],
    output_format: str,
    out: Optional[str],
) -> None:
    """
    Check that every tuple passing the hypotheses permutes.

    Exit status is 0 with no violations, 1 otherwise.

    Examples:

        \b
        permupoly sweep --field 5^1 --family T33 --workers 1
        permupoly sweep --field 7^1 --family T35 --format json --out t35.json
    """
    stopwatch = Stopwatch()
    try:
        runtime = get_runtime(ctx, budget)
        tower = runtime.build_tower(field_spec)
        workers = runtime.config.compute.workers if workers is None else workers
        report = soundness_sweep(family, tower, budget=runtime.search_budget, workers=workers)
    except PermupolyError as e:
        fail(e)
    except Exception as e:
        fail_unexpected('sweep', e)

    request = {"command": "sweep", "field": field_spec, "family": family}
    emit(make_record(request, report.to_dict(), stopwatch, tower), output_format, out, _render)
    ctx.exit(EXIT_OK if report.sound else EXIT_FALSE)
