"""
verify CLI command implementation.

Checks one family instance: the theorem's hypotheses and exhaustive
bijectivity (plus completeness for T31).
"""

from typing import Any, Dict, Optional

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
    render_conditions,
    render_verdict,
    status,
)
from src.lib.exceptions import PermupolyError
from src.lib.logging_config import get_logger
from src.models.entities import FAMILY_IDS, RunRecord
from src.services.families import check_conditions, coeffs_to_json, parse_coeffs
from src.services.permcheck import ExhaustiveChecker

logger = get_logger(__name__)


def run_verify(runtime: Any, field_spec: str, family: str, coeffs_text: str, check: str) -> Dict[str, Any]:
    """Build the results payload; 'passed' is the overall verdict."""
    tower = runtime.build_tower(field_spec)
    coeffs = parse_coeffs(family, coeffs_text, tower)
    results: Dict[str, Any] = {"family": family, "coeffs": coeffs_to_json(coeffs, tower)}
    passed = True

    if check in ('conditions', 'both'):
        report = check_conditions(family, coeffs, tower)
        results["conditions"] = report.to_dict()
        passed = passed and report.verdict

    if check in ('permutation', 'both'):
        checker = ExhaustiveChecker(tower, runtime.enumeration_budget)
        if family == "T31":
            completeness = checker.is_complete(family, coeffs)
            results["permutation"] = completeness.f.to_dict()
            results["completeness"] = completeness.to_dict()
            passed = passed and completeness.is_complete
        else:
            verdict = checker.is_permutation(family, coeffs)
            results["permutation"] = verdict.to_dict()
            passed = passed and verdict.is_permutation

    results["passed"] = passed
    return {"tower": tower, "results": results}


def _render(record: RunRecord) -> None:
    results = record.results
    header(f"permupoly verify: {results['family']} over {record.tower['spec']}")
    click.echo(f"Coefficients: {results['coeffs']}")
    if "conditions" in results:
        click.echo("\nHypotheses:")
        render_conditions(results["conditions"])
    if "permutation" in results:
        click.echo("\nExhaustive check:")
        render_verdict("permutation", results["permutation"])
    if "completeness" in results:
        render_verdict("f(x) + εx permutation (ε = 1)", results["completeness"]["f_plus_eps"])
    click.echo("\n" + SEPARATOR)
    click.echo(f"Verdict: {status(results['passed'])}\n")


@click.command(name='verify')
@click.option('--field', 'field_spec', required=True, help="Field spec, e.g. '7^1'")
@click.option('--family', required=True, type=click.Choice(FAMILY_IDS), help='Family id')
@click.option('--coeffs', 'coeffs_text', required=True, help='Coefficients as JSON, e.g. \'{"A":3}\'')
@click.option(
    '--check',
    type=click.Choice(['conditions', 'permutation', 'both']),
    default='both',
    show_default=True,
    help='What to verify',
)
@budget_option
@output_options
@click.pass_context
def verify(
    ctx: click.Context,
    field_spec: str,
    family: str,
    coeffs_text: str,
    check: str,
    budget: Optional[int],
    output_format: str,
    out: Optional[str],
) -> None:
    """
    Verify one family instance over F_{q^3}.

    Exit status is 0 when every requested check passes, 1 when one fails.

    Examples:

        \b
        permupoly verify --field 7^1 --family T31 --coeffs '{"A":3}' --check permutation
        permupoly verify --field 5^1 --family T33 --coeffs '{"A":2,"B":3}' --format json
    """
    stopwatch = Stopwatch()
    try:
        runtime = get_runtime(ctx, budget)
        outcome = run_verify(runtime, field_spec, family, coeffs_text, check)
    except PermupolyError as e:
        fail(e)
    except Exception as e:
        fail_unexpected('verify', e)

    request = {
        "command": "verify",
        "field": field_spec,
        "family": family,
        "coeffs": outcome["results"]["coeffs"],
        "check": check,
    }
    record = make_record(request, outcome["results"], stopwatch, outcome["tower"])
    emit(record, output_format, out, _render)
    ctx.exit(EXIT_OK if outcome["results"]["passed"] else EXIT_FALSE)
