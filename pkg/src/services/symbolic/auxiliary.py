"""
Second-case eliminants r_1 (T38) and r_1, r_2 (T39).

When the quadratic factor left by the elimination pipeline vanishes, its root
x = X(a, b, c) / M is put back into the three equations, with y and z the
cyclic images of x. The system is homogeneous in x, y, z, a, b, c, so a = 1
is fixed; b and c are eliminated by resultants and the coefficient that the
relation determines is removed last. What remains is a polynomial in two
coefficients that the theorem requires to be nonzero.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

from src.lib.exceptions import DerivationError, UnknownTheoremError
from src.lib.logging_config import get_logger
from src.lib.registry import theorem_entry
from src.models.entities import DerivedPolynomial
from src.services.symbolic.derivation import (
    PRINTED_FOR,
    classify_by_division,
    derive_m,
    eliminate_linear,
    printed_polynomial,
)
from src.services.symbolic.multipoly import (
    MultiPoly,
    VarSet,
    content_and_primitive,
    divide_out,
    exact_div,
    sign_normalize,
)
from src.services.symbolic.pipelines import build_system
from src.services.symbolic.resultant import resultant

logger = get_logger(__name__)

ROOT_CYCLE = {"a": "b", "b": "c", "c": "a"}


@dataclass(frozen=True)
class SecondCase:
    """
    x = numerator / denominator, a root of the pipeline's quadratic factor.

    reparametrize substitutes coefficients before anything else (T39 writes
    A as -A^2, -A being a square). eliminate names the coefficient the
    relation removes; known_factors are divided out of the final eliminant.
    """
    theorem: str
    numerator: str
    denominator: str
    eliminate: str
    reparametrize: Tuple[Tuple[str, str], ...] = ()
    known_factors: Tuple[str, ...] = ()


SECOND_CASES: Dict[str, SecondCase] = {
    "r1_T38": SecondCase(
        theorem="T38",
        numerator="-Bb",
        denominator="2C",
        eliminate="B",
        known_factors=("A", "C", "C - 1"),
    ),
    "r1_T39": SecondCase(
        theorem="T39",
        numerator="a",
        denominator="AB + C",
        eliminate="C",
        reparametrize=(("A", "-A^2"),),
        known_factors=("A", "A - 1", "A + 1"),
    ),
    "r2_T39": SecondCase(
        theorem="T39",
        numerator="-a",
        denominator="AB - C",
        eliminate="C",
        reparametrize=(("A", "-A^2"),),
        known_factors=("A", "A - 1", "A + 1"),
    ),
}


def second_case(name: str) -> SecondCase:
    if name not in SECOND_CASES:
        raise UnknownTheoremError(name)
    return SECOND_CASES[name]


def substitute_root(f: MultiPoly, roots: Dict[str, MultiPoly], denominator: MultiPoly) -> MultiPoly:
    """f with each variable v in roots replaced by roots[v] / denominator, cleared."""
    varset = f.varset
    positions = [varset.index(name) for name in roots]
    top = max(sum(exps[i] for i in positions) for exps, _ in f.terms())
    acc = varset.zero()
    for exps, coeff in f.terms():
        term = varset.const(coeff)
        degree = 0
        for name, e in zip(varset.names, exps):
            if not e:
                continue
            if name in roots:
                term = term * roots[name] ** e
                degree += e
            else:
                term = term * varset.gen(name) ** e
        acc = acc + term * denominator ** (top - degree)
    return acc


def relation_polynomial(theorem: str, varset: VarSet) -> MultiPoly:
    relation = theorem_entry(theorem).get("relation")
    if not relation:
        raise DerivationError(f"{theorem} has no coefficient relation")
    return varset.parse(relation["monomial"]) - varset.parse(relation["replacement"])


def _reparametrized(f: MultiPoly, case: SecondCase) -> MultiPoly:
    for name, text in case.reparametrize:
        f = f.compose(name, f.varset.parse(text))
    return f


def _strip_integer_content(f: MultiPoly) -> MultiPoly:
    _, f = content_and_primitive(f)
    return f


@lru_cache(maxsize=None)
def derive_second_case(name: str) -> DerivedPolynomial:
    """
    Eliminate b, c and the relation's coefficient from the system at x = X / M.

    Raises:
        UnknownTheoremError: If name is not one of SECOND_CASES
        DerivationError: If an elimination step degenerates to zero
    """
    case = second_case(name)
    equations = [_reparametrized(f, case) for f in build_system(case.theorem)]
    varset = equations[0].varset
    relation = _reparametrized(relation_polynomial(case.theorem, varset), case)

    x_root = varset.parse(case.numerator)
    y_root = x_root.permute(ROOT_CYCLE)
    roots = {"x": x_root, "y": y_root, "z": y_root.permute(ROOT_CYCLE)}
    denominator = varset.parse(case.denominator)
    one = varset.const(1)
    system = [substitute_root(f, roots, denominator).compose("a", one) for f in equations]

    linear = relation.degree(case.eliminate) == 1
    if linear:
        coeffs = relation.coefficients(case.eliminate)
        system = [eliminate_linear(g, case.eliminate, -coeffs[0], coeffs[1]) for g in system]
        logger.debug(f"{name}: {case.eliminate} removed through the linear relation")

    params = tuple(n for n in theorem_entry(case.theorem)["slots"] if not (linear and n == case.eliminate))
    working = VarSet(("b", "c") + params)
    system = [_strip_integer_content(g.change_varset(working)) for g in system]
    relation = relation.change_varset(VarSet(("b", "c") + tuple(theorem_entry(case.theorem)["slots"])))

    logger.info(f"{name}: eliminating c (degrees {[g.degree('c') for g in system]})")
    r12 = resultant(system[0], system[1], "c", method="prs")
    r13 = resultant(system[0], system[2], "c", method="prs")
    if r12.is_zero or r13.is_zero:
        raise DerivationError(f"{name}: two equations share a factor in c")
    common = MultiPoly(working, r12.element.gcd(r13.element))
    if common.degree("b") > 0:
        r12, r13 = exact_div(r12, common), exact_div(r13, common)
        logger.debug(f"{name}: removed a common factor of degree {common.degree('b')} in b")

    logger.info(f"{name}: eliminating b (degrees {r12.degree('b')} and {r13.degree('b')})")
    eliminant = resultant(r12, r13, "b", method="prs")
    if eliminant.is_zero:
        raise DerivationError(f"{name}: the c-eliminants share a factor in b")

    if not linear:
        eliminant = resultant(eliminant.change_varset(relation.varset), relation, case.eliminate, method="prs")
        if eliminant.is_zero:
            raise DerivationError(f"{name}: the eliminant vanishes on the relation")

    printed = printed_polynomial(name)
    target = printed.varset
    r = eliminant.change_varset(target)
    for text in case.known_factors:
        r, mult = divide_out(r, target.parse(text))
        logger.debug(f"{name}: removed ({text})^{mult}")
    r = _strip_integer_content(r)
    _, r = sign_normalize(r)

    match, sign, cofactor = classify_by_division(r, printed)
    note = f"x = ({case.numerator}) / ({case.denominator})"
    if case.reparametrize:
        note += ", with " + ", ".join(f"{v} -> {t}" for v, t in case.reparametrize)
    if cofactor is not None:
        note += f"; extra factor with {len(cofactor)} terms"
    logger.info(f"{name}: derived ({len(r)} terms), match={match}")
    return DerivedPolynomial(
        name=name,
        theorem=case.theorem,
        poly=r,
        sign=sign,
        match=match,
        stages={"eliminant": eliminant},
        note=note,
    )


def derive_named(name: str) -> DerivedPolynomial:
    """Derivation behind a printed name: m_<id>, r_T38 or a second-case eliminant."""
    if name in SECOND_CASES:
        return derive_second_case(name)
    for theorem, printed_name in PRINTED_FOR.items():
        if name in (printed_name, f"m_{theorem}"):
            return derive_m(theorem)
    if name.startswith("m_"):
        return derive_m(name[2:])
    raise UnknownTheoremError(name)
