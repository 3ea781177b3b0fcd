"""
search CLI command implementation.

Streams the coefficient tuples of one family that pass the hypotheses,
permute, or either.
"""

import itertools
from typing import Optional

import click

from src.cli.common import (
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
from src.services.permcheck import MODES, search

logger = get_logger(__name__)


def _render(record: RunRecord) -> None:
    results = record.results
    header(f"permupoly search: {results['family']} over {record.tower['spec']} ({results['mode']})")
    for entry in results["matches"]:
        parts = [f"{entry['coeffs']}"]
        if "conditions" in entry:
            parts.append(f"hypotheses {status(entry['conditions']['verdict'])}")
        if "permutation" in entry:
            parts.append(f"permutation {status(entry['permutation']['is_permutation'])}")
        click.echo("  " + "  ".join(parts))
    click.echo(SEPARATOR)
    suffix = " (limit reached)" if results["truncated"] else ""
    click.echo(f"{results['count']} matching tuple(s){suffix}\n")


@click.command(name='search')
@click.option('--field', 'field_spec', required=True, help="Field spec, e.g. '5^1'")
@click.option('--family', required=True, type=click.Choice(FAMILY_IDS), help='Family id')
@click.option('--mode', type=click.Choice(MODES), default='both', show_default=True, help='Which tuples to emit')
@click.option('--limit', type=click.IntRange(min=1), default=None, help='Stop after this many matches')
@budget_option
@output_options
@click.pass_context
def search_command(
    ctx: click.Context,
    field_spec: str,
    family: str,
    mode: str,
    limit: Optional[int],
    budget: Optional[int],
    output_format: str,
    out: Optional[str],
) -> None:
    """
    Search the coefficient space of a family.

    Tuples are visited in mixed-radix order, first slot most significant.

    Examples:

        \b
        permupoly search --field 5^1 --family T33 --mode permutations_only
        permupoly search --field 5^1 --family T34 --mode conditions_only --format json
    """
    stopwatch = Stopwatch()
    try:
        runtime = get_runtime(ctx, budget)
        tower = runtime.build_tower(field_spec)
        stream = search(family, tower, mode, budget=runtime.search_budget)
        taken = list(itertools.islice(stream, limit + 1 if limit else None))
    except PermupolyError as e:
        fail(e)
    except Exception as e:
        fail_unexpected('search', e)

    truncated = limit is not None and len(taken) > limit
    matches = [result.to_dict() for result in taken[:limit]]
    results = {
        "family": family,
        "mode": mode,
        "matches": matches,
        "count": len(matches),
        "truncated": truncated,
    }
    request = {"command": "search", "field": field_spec, "family": family, "mode": mode, "limit": limit}
    emit(make_record(request, results, stopwatch, tower), output_format, out, _render)
    ctx.exit(EXIT_OK)
