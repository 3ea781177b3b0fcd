"""
Elimination pipelines for the theorems' resultant identities.

Injectivity of each family reduces f(x) = a to a system of three equations in
x, y = x^q, z = y^q. Two resultants in z and one in y eliminate the
conjugates; dividing out the known factors and rewriting with the
coefficient relation leaves a residual αx + β.
"""

from dataclasses import dataclass
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src import __version__
from src.lib.exceptions import InexactDivisionError, PipelineError, UnknownTheoremError
from src.lib.logging_config import get_logger
from src.lib.registry import theorem_entry
from src.models.entities import ResultantReport
from src.services.symbolic.multipoly import (
    DEFAULT_REWRITE_PASSES,
    MultiPoly,
    VarSet,
    exact_div,
    sign_normalize,
    substitute_rewrite,
)
from src.services.symbolic.resultant import resultant

logger = get_logger(__name__)

CYCLE = {"x": "y", "y": "z", "z": "x", "a": "b", "b": "c", "c": "a"}
COEFF_CYCLE = {"A": "B", "B": "C", "C": "A"}


@dataclass(frozen=True)
class EliminationScript:
    """
    One theorem's elimination recipe.

    r1 and r2 name the pair of equations (1, 2 or 3) eliminated in z and the
    monomial divided out afterwards. rr_divisors are removed from Res(R1, R2, y)
    before the relation is applied, post_divisors after.
    """
    variables: Tuple[str, ...]
    f1: str
    r1: Tuple[int, int, str]
    r2: Tuple[int, int, str]
    rr_divisors: Tuple[Tuple[str, int], ...] = ()
    post_divisors: Tuple[Tuple[str, int], ...] = ()
    cycle_coefficients: bool = False
    source: str = "elimination script"


_NINE = ("x", "y", "z", "A", "B", "C", "a", "b", "c")

SCRIPTS: Dict[str, EliminationScript] = {
    "T31": EliminationScript(
        variables=_NINE,
        f1="yz + Ax^2 - ax",
        r1=(1, 2, "1"),
        r2=(2, 3, "1"),
        rr_divisors=(("B", 3), ("x", 7), ("Ax - a", 1)),
        cycle_coefficients=True,
        source="elimination script; divisors from the factored eliminant",
    ),
    "T33": EliminationScript(
        variables=("x", "y", "z", "A", "B", "a", "b", "c"),
        f1="xz^2 + Axy^2 + Bxyz - azy",
        r1=(1, 3, "xy^2"),
        r2=(2, 3, "x^2y"),
        rr_divisors=(("c", 8), ("x", 4)),
    ),
    "T34": EliminationScript(
        variables=("x", "y", "z", "A", "C", "a", "b", "c"),
        f1="yz + Azx + Cx^2 - ax",
        r1=(1, 2, "1"),
        r2=(1, 3, "x"),
        rr_divisors=(("x", 2), ("Cx - a", 3)),
    ),
    "T35": EliminationScript(
        variables=("x", "y", "z", "B", "C", "a", "b", "c"),
        f1="yz + Byx + Cx^2 - ax",
        r1=(1, 2, "1"),
        r2=(1, 3, "x"),
        rr_divisors=(("x", 2), ("Cx - a", 3)),
    ),
    "T36": EliminationScript(
        variables=_NINE,
        f1="yz + Axz + Bxy + Cx^2 - ax",
        r1=(1, 2, "1"),
        r2=(1, 3, "x"),
        post_divisors=(("C", 2), ("x", 2), ("Cx - a", 1), ("(C - 1)^2x + a", 2)),
        source="elimination script; divisors from the factored eliminant",
    ),
    "T37": EliminationScript(
        variables=_NINE,
        f1="y^2z + Ax^2z + Bxyz + Cx^2y - axy",
        r1=(1, 2, "xy^2"),
        r2=(1, 3, "x^2y"),
        post_divisors=(("x", 4), ("Cx - a", 8)),
        source="elimination script; divisors from the factored eliminant",
    ),
    "T38": EliminationScript(
        variables=_NINE,
        f1="yz^2 + Ax^2y + Bxyz + Cx^2z - axz",
        r1=(1, 2, "x^2y"),
        r2=(2, 3, "xy^2"),
        rr_divisors=(("x", 4), ("x^2C^2 + xBCb + Ab^2", 4)),
    ),
    "T39": EliminationScript(
        variables=_NINE,
        f1="y^2z + Ax^2z + Bxy^2 + Cx^2y - axy",
        r1=(1, 2, "xy^2"),
        r2=(1, 3, "x^2y"),
        rr_divisors=(("x", 4), ("AB^2x^2 + (Cx - a)^2", 4)),
    ),
    "T310": EliminationScript(
        variables=("x", "y", "z", "A", "B", "C", "D", "a", "b", "c"),
        f1="y^2z + Ax^2z + Bxyz + Cxy^2 + Dx^2y - axy",
        r1=(1, 2, "xy^2"),
        r2=(1, 3, "x^2y"),
        rr_divisors=(("x", 4), ("(AC^2 - BCD + D^2)x^2 + (BCa - 2Da)x + a^2", 4)),
        source="elimination script (third equation is the Frobenius image of the second)",
    ),
}


def script_for(theorem: str) -> EliminationScript:
    if theorem not in SCRIPTS:
        raise UnknownTheoremError(theorem)
    return SCRIPTS[theorem]


def build_system(theorem: str) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    """f1 and its two cyclic images x→y→z→x, a→b→c→a."""
    script = script_for(theorem)
    varset = VarSet(script.variables)
    cycle = dict(CYCLE)
    if script.cycle_coefficients:
        cycle.update(COEFF_CYCLE)
    f1 = varset.parse(script.f1)
    f2 = f1.permute(cycle)
    f3 = f2.permute(cycle)
    return f1, f2, f3


def relation_rule(theorem: str, varset: VarSet) -> Optional[Tuple[MultiPoly, MultiPoly]]:
    """The theorem's coefficient relation as (monomial, replacement), if it has one."""
    relation = theorem_entry(theorem).get("relation")
    if not relation:
        return None
    return varset.parse(relation["monomial"]), varset.parse(relation["replacement"])


def _divide(f: MultiPoly, divisor: MultiPoly, mult: int, stage: str) -> MultiPoly:
    for _ in range(mult):
        try:
            f = exact_div(f, divisor)
        except InexactDivisionError as e:
            raise PipelineError(
                f"{stage}: {divisor.to_text()} does not divide the eliminant "
                f"(remainder has {len(e.remainder)} terms)"
            ) from e
    return f


def _product(varset: VarSet, factors: Sequence[Tuple[MultiPoly, int]]) -> MultiPoly:
    return reduce(lambda acc, fm: acc * fm[0] ** fm[1], factors, varset.const(1))


def theorem_pipeline(
    theorem: str,
    cache: Any = None,
    strict: bool = True,
    max_passes: int = DEFAULT_REWRITE_PASSES,
) -> ResultantReport:
    """
    Run the elimination for one theorem.

    Args:
        theorem: Theorem id (T31, T33, ..., T310)
        cache: Optional IResultCache; reports are stored under the theorem id and version
        strict: Raise PipelineError when the residual is not linear in x
        max_passes: Pass cap for the relation rewrite

    Returns:
        ResultantReport with the divided factors, residual, α and β

    Raises:
        UnknownTheoremError: If theorem has no elimination script
        PipelineError: If a division fails, or (strict) the residual is not linear
    """
    script = script_for(theorem)
    key = cache_key(theorem)
    if cache is not None:
        cached = cache.get(key)
        if cached is not None:
            logger.info(f"{theorem}: elimination report loaded from cache")
            report = report_from_dict(cached)
            _check_linear(report, strict)
            return report

    f1, f2, f3 = build_system(theorem)
    varset = f1.varset
    eqs = {1: f1, 2: f2, 3: f3}

    partials = []
    for label, (i, j, monomial) in (("R1", script.r1), ("R2", script.r2)):
        logger.info(f"{theorem}: {label} = Res(f{i}, f{j}, z)")
        res = resultant(eqs[i], eqs[j], "z")
        divisor = varset.parse(monomial)
        if divisor != 1:
            res = _divide(res, divisor, 1, label)
        partials.append(res)

    logger.info(f"{theorem}: RR = Res(R1, R2, y)")
    raw = resultant(partials[0], partials[1], "y")
    logger.debug(f"{theorem}: raw resultant has {len(raw)} terms")

    factors = [(varset.parse(text), mult) for text, mult in script.rr_divisors]
    eliminant = raw
    for factor, mult in factors:
        eliminant = _divide(eliminant, factor, mult, "RR")

    rule = relation_rule(theorem, varset)
    rewritten = eliminant
    relation_text = ""
    if rule is not None:
        relation_text = f"{rule[0].to_text()} -> {rule[1].to_text()}"
        rewritten = substitute_rewrite(eliminant, rule[0], rule[1], max_passes)
        logger.info(f"{theorem}: rewrote with {relation_text}, {len(rewritten)} terms remain")

    post = [(varset.parse(text), mult) for text, mult in script.post_divisors]
    residual = rewritten
    for factor, mult in post:
        residual = _divide(residual, factor, mult, "rewritten RR")
    sign, residual = sign_normalize(residual)

    reconstructs = (
        _product(varset, factors) * eliminant == raw
        and _product(varset, post) * residual * sign == rewritten
    )
    linear = residual.degree("x") == 1
    report = ResultantReport(
        theorem=theorem,
        raw=raw,
        factors=factors,
        residual=residual,
        sign=sign,
        residual_is_linear_in_x=linear,
        rewritten_factors=post,
        reconstructs=reconstructs,
        alpha=residual.coeff("x", 1) if linear else None,
        beta=residual.coeff("x", 0) if linear else None,
        relation=relation_text,
        source=script.source,
    )
    logger.info(f"{theorem}: residual degree {residual.degree('x')} in x, reconstructs={reconstructs}")
    if cache is not None:
        cache.put(key, report.to_dict())
    _check_linear(report, strict)
    return report


def _check_linear(report: ResultantReport, strict: bool) -> None:
    if strict and not report.residual_is_linear_in_x:
        raise PipelineError(
            f"{report.theorem}: residual has degree {report.residual.degree('x')} in x, expected 1"
        )


def cache_key(theorem: str) -> str:
    return f"pipeline-{theorem}-v{__version__}"


def report_from_dict(data: Dict[str, Any]) -> ResultantReport:
    """Rebuild a ResultantReport from its to_dict() form."""
    varset = VarSet(data["varset"])

    def poly(terms: Optional[List[Dict[str, Any]]]) -> Optional[MultiPoly]:
        return None if terms is None else varset.from_json(terms)

    def factor_list(entries: List[Dict[str, Any]]) -> List[Tuple[MultiPoly, int]]:
        return [(varset.from_json(e["factor"]), int(e["multiplicity"])) for e in entries]

    return ResultantReport(
        theorem=data["theorem"],
        raw=varset.from_json(data["raw"]),
        factors=factor_list(data["factors"]),
        residual=varset.from_json(data["residual"]),
        sign=int(data["sign"]),
        residual_is_linear_in_x=bool(data["residual_is_linear_in_x"]),
        rewritten_factors=factor_list(data.get("rewritten_factors", [])),
        reconstructs=bool(data.get("reconstructs", False)),
        alpha=poly(data.get("alpha")),
        beta=poly(data.get("beta")),
        relation=data.get("relation", ""),
        source=data.get("source", ""),
    )
