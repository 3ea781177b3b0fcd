"""
pipeline CLI command implementation.

Runs a theorem's elimination pipeline and checks the reconstruction identity.
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
    status,
)
from src.lib.exceptions import PermupolyError, PipelineError
from src.lib.logging_config import get_logger
from src.models.entities import RunRecord
from src.services.symbolic.multipoly import VarSet
from src.services.symbolic.pipelines import theorem_pipeline

logger = get_logger(__name__)


def _text(varset: VarSet, terms: list) -> str:
    return varset.from_json(terms).to_text()


def _render(record: RunRecord) -> None:
    report = record.results
    if "error" in report:
        header(f"permupoly pipeline: {report['theorem']}")
        click.echo(click.style(report["error"], fg='red'))
        click.echo()
        return
    varset = VarSet(report["varset"])
    header(f"permupoly pipeline: {report['theorem']}")
    click.echo(f"Raw resultant: {len(report['raw'])} terms")
    for entry in report["factors"]:
        click.echo(f"  divided out ({_text(varset, entry['factor'])})^{entry['multiplicity']}")
    if report["relation"]:
        click.echo(f"Relation: {report['relation']}")
    for entry in report["rewritten_factors"]:
        click.echo(f"  divided out ({_text(varset, entry['factor'])})^{entry['multiplicity']} after rewriting")
    click.echo(f"Residual: {len(report['residual'])} terms, sign {report['sign']:+d}")
    if report["alpha"] is not None:
        click.echo(f"  α: {len(report['alpha'])} terms")
        click.echo(f"  β: {len(report['beta'])} terms")
    click.echo(SEPARATOR)
    click.echo(f"Residual linear in x: {status(report['residual_is_linear_in_x'])}")
    click.echo(f"Reconstructs raw resultant: {status(report['reconstructs'])}\n")


@click.command(name='pipeline')
@click.option('--theorem', required=True, help='Theorem id (T31, T33, ..., T310)')
@click.option('--no-cache', is_flag=True, help='Recompute even if a cached report exists')
@output_options
@click.pass_context
def pipeline(
    ctx: click.Context,
    theorem: str,
    no_cache: bool,
    output_format: str,
    out: Optional[str],
) -> None:
    """
    Eliminate y and z from a theorem's system and factor the eliminant.

    Exit status is 0 when the residual is linear in x and the divided
    factors reconstruct the raw resultant, 1 otherwise.

    Examples:

        \b
        permupoly pipeline --theorem T34
        permupoly pipeline --theorem T31 --format json --out t31.json
    """
    stopwatch = Stopwatch()
    try:
        runtime = get_runtime(ctx)
        cache = None if no_cache else runtime.cache
        report = theorem_pipeline(
            theorem, cache=cache, strict=False, max_passes=runtime.config.budgets.rewrite_passes
        )
        results = report.to_dict()
        passed = report.reconstructs and report.residual_is_linear_in_x
    except PipelineError as e:
        logger.warning(f"{theorem}: {e.message}")
        results = {"theorem": theorem, "error": e.message}
        passed = False
    except PermupolyError as e:
        fail(e)
    except Exception as e:
        fail_unexpected('pipeline', e)

    request = {"command": "pipeline", "theorem": theorem}
    emit(make_record(request, results, stopwatch), output_format, out, _render)
    ctx.exit(EXIT_OK if passed else EXIT_FALSE)
