"""
derive CLI command implementation.

Re-derives a theorem's auxiliary polynomial and compares it with the printed form.
"""

from typing import Optional

import click

from src.cli.common import (
    EXIT_FALSE,
    EXIT_OK,
    SEPARATOR,
    Stopwatch,
    emit,
    fail,
    fail_unexpected,
    get_runtime,
    header,
    make_record,
    output_options,
)
from src.lib.exceptions import PermupolyError
from src.lib.logging_config import get_logger
from src.models.entities import RunRecord
from src.services.symbolic.auxiliary import SECOND_CASES, derive_second_case
from src.services.symbolic.derivation import derivable_theorems, derive_m

logger = get_logger(__name__)

_MATCH_COLORS = {"exact": 'green', "proportional": 'green', "unprinted": 'yellow', "mismatch": 'red'}


def _render(record: RunRecord) -> None:
    derived = record.results
    header(f"permupoly derive: {derived['name']} ({derived['theorem']})")
    click.echo(derived["text"])
    click.echo(SEPARATOR)
    match = click.style(derived["match"], fg=_MATCH_COLORS.get(derived["match"], 'white'), bold=True)
    click.echo(f"Printed form: {match} (sign {derived['sign']:+d})")
    if derived["note"]:
        click.echo(f"  {derived['note']}")
    click.echo()


@click.command(name='derive')
@click.option('--theorem', required=True, help=f"Theorem id ({', '.join(derivable_theorems())})")
@click.option(
    '--auxiliary',
    type=click.Choice(sorted(SECOND_CASES)),
    help='Derive a second-case eliminant of the theorem instead (r1_T38, r1_T39, r2_T39)',
)
@click.option('--stages', is_flag=True, help='Keep the intermediate relations in the run record')
@output_options
@click.pass_context
def derive(
    ctx: click.Context,
    theorem: str,
    auxiliary: Optional[str],
    stages: bool,
    output_format: str,
    out: Optional[str],
) -> None:
    """
    Derive m(t) (or r(A, C) for T38) from the theorem's conjugate map.

    Exit status is 0 unless a printed form exists and the derivation
    disagrees with it.

    Examples:

        \b
        permupoly derive --theorem T34
        permupoly derive --theorem T37 --stages --format json
        permupoly derive --theorem T38 --auxiliary r1_T38
    """
    if auxiliary and SECOND_CASES[auxiliary].theorem != theorem:
        raise click.BadParameter(
            f"{auxiliary} belongs to {SECOND_CASES[auxiliary].theorem}, not {theorem}", param_hint='--auxiliary'
        )

    stopwatch = Stopwatch()
    try:
        runtime = get_runtime(ctx)
        if auxiliary:
            derived = derive_second_case(auxiliary)
        else:
            derived = derive_m(theorem, runtime.config.budgets.rewrite_passes)
    except PermupolyError as e:
        fail(e)
    except Exception as e:
        fail_unexpected('derive', e)

    results = derived.to_dict()
    if not stages:
        results.pop("stages")
    request = {"command": "derive", "theorem": theorem}
    if auxiliary:
        request["auxiliary"] = auxiliary
    emit(make_record(request, results, stopwatch), output_format, out, _render)
    ctx.exit(EXIT_FALSE if derived.match == "mismatch" else EXIT_OK)
