"""
count-cpp CLI command implementation.

Counts the complete permutation binomials x^{q^2+q-1} + Ax and compares the
count with 2(q^2+q+1)/3.
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
from src.models.entities import RunRecord
from src.services.families import count_cpp_binomials
from src.services.permcheck import ExhaustiveChecker

logger = get_logger(__name__)


def _render(record: RunRecord) -> None:
    report = record.results
    header(f"permupoly count-cpp over {report['tower']}")
    click.echo(f"Complete binomials (exhaustive):   {report['complete_count']}")
    click.echo(f"Formula 2(q^2+q+1)/3:              {report['formula']}")
    click.echo(f"Permutation binomials (any A):     {report['permutation_count']}")
    click.echo(f"Pass the printed hypotheses:       {report['hypothesis_count']}")
    click.echo(f"Of the form θ^(m(q-1)/2):          {report['parameterized_count']}")
    click.echo(f"  ... and complete:                {report['parameterized_complete']}")
    click.echo(f"Hypotheses but not of that form:   {report['hypothesis_not_parameterized']}")
    click.echo(SEPARATOR)
    click.echo(f"Count matches formula: {status(report['matches_formula'])}\n")


@click.command(name='count-cpp')
@click.option('--field', 'field_spec', required=True, help="Field spec with q ≡ 1 (mod 3), e.g. '7^1'")
@budget_option
@output_options
@click.pass_context
def count_cpp(
    ctx: click.Context,
    field_spec: str,
    budget: Optional[int],
    output_format: str,
    out: Optional[str],
) -> None:
    """
    Count A for which x^{q^2+q-1} + Ax is a complete permutation.

    Exit status is 0 when the count equals 2(q^2+q+1)/3, 1 otherwise,
    and 2 when q ≢ 1 (mod 3).

    Examples:

        \b
        permupoly count-cpp --field 7^1
        permupoly count-cpp --field 13^1 --format json
    """
    stopwatch = Stopwatch()
    try:
        runtime = get_runtime(ctx, budget)
        tower = runtime.build_tower(field_spec)
        report = count_cpp_binomials(tower, ExhaustiveChecker(tower, runtime.enumeration_budget))
    except PermupolyError as e:
        fail(e)
    except Exception as e:
        fail_unexpected('count-cpp', e)

    request = {"command": "count-cpp", "field": field_spec}
    emit(make_record(request, report.to_dict(), stopwatch, tower), output_format, out, _render)
    ctx.exit(EXIT_OK if report.matches_formula else EXIT_FALSE)
