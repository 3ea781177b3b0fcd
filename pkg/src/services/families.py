"""
The nine polynomial families and their printed hypotheses.

Every family is x^{e_0} + sum(c_i x^{e_i}) over F_{q^3} with exponents drawn
from q^2+q-1, q^2-q+1, q^3-q^2+q, q^2, q and 1. Modulo q^3 - 1 each of these
is d0 + d1*q + d2*q^2 with digits in {-1, 0, 1}, so x^e is a product of x,
its Frobenius images and their inverses; permcheck builds its tables that way.
"""

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.lib.exceptions import CoefficientError, FieldSpecError, UnknownFamilyError
from src.lib.logging_config import get_logger
from src.lib.registry import theorem_entry
from src.models.entities import (
    CoeffSet,
    ConditionReport,
    ConditionRow,
    CppCountReport,
    ExponentTerm,
)
from src.services.kernels import TowerArrays
from src.services.symbolic.multipoly import MultiPoly, VarSet, eval_mod_p
from src.services.tower import Tower, TowerElem

logger = get_logger(__name__)

Digits = Tuple[int, int, int]


@dataclass(frozen=True)
class ExponentForm:
    """A symbolic exponent in q with its Frobenius digits."""
    text: str
    digits: Digits
    value: Callable[[int], int]


FORMS: Dict[str, ExponentForm] = {
    "q^2+q-1": ExponentForm("q^2+q-1", (-1, 1, 1), lambda q: q * q + q - 1),
    "q^2-q+1": ExponentForm("q^2-q+1", (1, -1, 1), lambda q: q * q - q + 1),
    "q^3-q^2+q": ExponentForm("q^3-q^2+q", (1, 1, -1), lambda q: q ** 3 - q * q + q),
    "q^2": ExponentForm("q^2", (0, 0, 1), lambda q: q * q),
    "q": ExponentForm("q", (0, 1, 0), lambda q: q),
    "1": ExponentForm("1", (1, 0, 0), lambda q: 1),
}

LEAD = "lead"

# (exponent form, slot) per family, lead term first
FAMILIES: Dict[str, Tuple[Tuple[str, str], ...]] = {
    "T31": (("q^2+q-1", LEAD), ("1", "A")),
    "T33": (("q^2-q+1", LEAD), ("q^3-q^2+q", "A"), ("1", "B")),
    "T34": (("q^2+q-1", LEAD), ("q^2", "A"), ("1", "C")),
    "T35": (("q^2+q-1", LEAD), ("q", "B"), ("1", "C")),
    "T36": (("q^2+q-1", LEAD), ("q^2", "A"), ("q", "B"), ("1", "C")),
    "T37": (("q^2+q-1", LEAD), ("q^2-q+1", "A"), ("q^2", "B"), ("1", "C")),
    "T38": (("q^2+q-1", LEAD), ("q^3-q^2+q", "A"), ("q", "B"), ("1", "C")),
    "T39": (("q^2+q-1", LEAD), ("q^2-q+1", "A"), ("q", "B"), ("1", "C")),
    "T310": (("q^2+q-1", LEAD), ("q^2-q+1", "A"), ("q^2", "B"), ("q", "C"), ("1", "D")),
}

# Families whose A lives in F_{q^3} rather than F_q
TOWER_SLOTS = {"T31": ("A",)}


def _family(family: str) -> Tuple[Tuple[str, str], ...]:
    if family not in FAMILIES:
        raise UnknownFamilyError(family)
    return FAMILIES[family]


def slots(family: str) -> Tuple[str, ...]:
    return tuple(slot for _, slot in _family(family) if slot != LEAD)


def exponents(family: str, q: int) -> List[ExponentTerm]:
    """Integer exponents of one family at q, lead term first."""
    return [ExponentTerm(FORMS[form].value(q), slot) for form, slot in _family(family)]


def exponent_digits(family: str) -> List[Digits]:
    return [FORMS[form].digits for form, _ in _family(family)]


def is_tower_slot(family: str, slot: str) -> bool:
    return slot in TOWER_SLOTS.get(family, ())


# Coefficients

def parse_coeffs(family: str, data: Union[str, Mapping[str, Any]], tower: Tower) -> CoeffSet:
    """
    Build a CoeffSet from JSON text or a mapping.

    Base-field values are integers or length-k lists; T31's A is an integer
    (embedded) or a length-3 list of base elements.

    Raises:
        CoefficientError: If the JSON is malformed or the slots do not match
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise CoefficientError(f"Coefficients are not valid JSON: {e}") from e
    if not isinstance(data, Mapping):
        raise CoefficientError("Coefficients must be a JSON object such as {\"A\": 3}")
    data = dict(data)
    named = data.pop("family", family)
    if named != family:
        raise CoefficientError(f"Coefficients are for {named}, not {family}")

    values: Dict[str, Any] = {}
    try:
        for slot, raw in data.items():
            if is_tower_slot(family, slot):
                values[slot] = (
                    tower.from_components(raw) if isinstance(raw, list) else tower.embed(raw)
                )
            else:
                values[slot] = tower.base(raw)
    except (FieldSpecError, TypeError) as e:
        raise CoefficientError(f"Bad coefficient value: {e}") from e

    coeffs = CoeffSet(family=family, values=values)
    try:
        coeffs.validate(slots(family))
    except ValueError as e:
        raise CoefficientError(str(e)) from e
    return coeffs


def coeffs_to_json(coeffs: CoeffSet, tower: Tower) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for slot, value in coeffs.values.items():
        out[slot] = value.to_json() if isinstance(value, TowerElem) else tower.base_to_json(value)
    return out


def coefficient_elements(coeffs: CoeffSet, tower: Tower) -> List[TowerElem]:
    """Family coefficients as tower elements, in term order (lead = 1)."""
    elements = [tower.one]
    for slot in slots(coeffs.family):
        value = coeffs.values[slot]
        elements.append(value if isinstance(value, TowerElem) else tower.embed(value))
    return elements


# Evaluation

def evaluate_raw(exps: Sequence[int], coeffs: Sequence[TowerElem], x: TowerElem, tower: Tower) -> TowerElem:
    """sum(c_i * x^{e_i})."""
    if len(exps) != len(coeffs):
        raise CoefficientError(f"{len(exps)} exponents but {len(coeffs)} coefficients")
    total = tower.zero
    for e, c in zip(exps, coeffs):
        total = total + c * x ** e
    return total


def evaluate(family: str, coeffs: CoeffSet, x: TowerElem, tower: Tower) -> TowerElem:
    exps = [term.exponent for term in exponents(family, tower.q)]
    return evaluate_raw(exps, coefficient_elements(coeffs, tower), x, tower)


# Hypotheses

@lru_cache(maxsize=None)
def _arrays(tower: Tower) -> TowerArrays:
    return TowerArrays(tower)


@lru_cache(maxsize=None)
def _mu_array(tower: Tower) -> np.ndarray:
    return _arrays(tower).constants(tower.mu_elements())


@lru_cache(maxsize=None)
def _hypothesis_poly(family: str, name: str) -> MultiPoly:
    """Parameter polynomial behind one hypothesis row."""
    from src.services.symbolic.auxiliary import derive_named
    from src.services.symbolic.derivation import printed_polynomial

    row = next(r for r in theorem_entry(family)["hypotheses"] if r["name"] == name)
    if "expr" in row:
        return VarSet(slots(family)).parse(row["expr"])
    if row.get("source") == "derived":
        return derive_named(row["poly"]).poly
    return printed_polynomial(row["poly"])


def _assignment(coeffs: CoeffSet) -> Dict[str, Any]:
    return dict(coeffs.values)


def _is_zero(value: Any) -> bool:
    return value.is_zero if isinstance(value, TowerElem) else not any(value)


def _value_json(value: Any, tower: Tower) -> Any:
    return value.to_json() if isinstance(value, TowerElem) else tower.base_to_json(value)


def mu_roots(poly: MultiPoly, coeffs: CoeffSet, tower: Tower, var: str = "t") -> List[TowerElem]:
    """Roots in μ_{q^2+q+1} of poly specialized at coeffs, as a polynomial in var."""
    arrays = _arrays(tower)
    assignment = _assignment(coeffs)
    lam = [eval_mod_p(c, assignment, tower) for c in poly.coefficients(var)]
    if all(_is_zero(c) for c in lam):
        return list(tower.mu_elements())
    consts = [arrays.constant(c if isinstance(c, TowerElem) else tower.embed(c)) for c in lam]
    mu = _mu_array(tower)
    values = arrays.horner(consts, mu)
    hits = np.nonzero(~values.reshape(len(mu), -1).any(axis=1))[0]
    elements = tower.mu_elements()
    return [elements[i] for i in hits]


def check_conditions(family: str, coeffs: CoeffSet, tower: Tower) -> ConditionReport:
    """
    Evaluate every printed hypothesis of the theorem for one coefficient tuple.

    Failures are rows, never exceptions.
    """
    entry = theorem_entry(family)
    q = tower.q
    gate = q % 3 == 1
    assignment = _assignment(coeffs)
    report = ConditionReport(family=family, tower=tower.describe())

    for row in entry["hypotheses"]:
        kind = row["kind"]
        name, label = row["name"], row["label"]

        if kind == "gate":
            report.rows.append(ConditionRow(name, label, gate, note="" if gate else f"q = {q}"))
            continue

        poly = _hypothesis_poly(family, name)

        if kind in ("zero", "nonzero"):
            value = eval_mod_p(poly, assignment, tower)
            passed = _is_zero(value) == (kind == "zero")
            report.rows.append(
                ConditionRow(name, label, passed, witness=None if passed else _value_json(value, tower))
            )
        elif kind == "norm_minus_one":
            value = _as_tower(eval_mod_p(poly, assignment, tower), tower)
            norm = tower.norm(value)
            passed = norm == tower.base(-1)
            report.rows.append(
                ConditionRow(name, label, passed, witness=None if passed else tower.base_to_json(norm))
            )
        elif kind == "not_in_mu":
            if not gate:
                report.rows.append(ConditionRow(name, label, False, note="not applicable: q ≢ 1 (mod 3)"))
                continue
            value = _as_tower(eval_mod_p(poly, assignment, tower), tower)
            inside = tower.in_mu(value, (q * q + q + 1) // 3)
            report.rows.append(ConditionRow(name, label, not inside))
        elif kind == "no_mu_roots":
            roots = mu_roots(poly, coeffs, tower)
            source = row.get("source", "printed")
            report.rows.append(
                ConditionRow(
                    name,
                    label,
                    not roots,
                    witness=roots[0].to_json() if roots else None,
                    note=f"m {source}",
                )
            )
        else:
            raise CoefficientError(f"Unknown hypothesis kind {kind!r} for {name}")

    logger.debug(f"{family} {coeffs_to_json(coeffs, tower)}: conditions {report.verdict}")
    return report


def _as_tower(value: Any, tower: Tower) -> TowerElem:
    return value if isinstance(value, TowerElem) else tower.embed(value)


# Roots

def nonzero_roots(family: str, coeffs: CoeffSet, tower: Tower) -> List[TowerElem]:
    """All x ≠ 0 with f(x) = 0, by enumeration."""
    return [x for x in tower.enumerate() if not x.is_zero and evaluate(family, coeffs, x, tower).is_zero]


def direct_mu_solutions(family: str, coeffs: CoeffSet, tower: Tower) -> List[TowerElem]:
    """
    u ∈ μ_{q^2+q+1} solving f(x)/x = 0 written in u = x^{q-1}.

    Each exponent e gives the power (e - 1)/(q - 1) of u.
    """
    q = tower.q
    powers = [(term.exponent - 1) // (q - 1) for term in exponents(family, q)]
    elements = coefficient_elements(coeffs, tower)
    solutions = []
    for u in tower.mu_elements():
        total = tower.zero
        for c, n in zip(elements, powers):
            total = total + c * u ** n
        if total.is_zero:
            solutions.append(u)
    return solutions


# Complete binomial counts

def cpp_formula(q: int) -> int:
    return 2 * (q * q + q + 1) // 3


def parameterized_binomial_coefficients(tower: Tower) -> List[TowerElem]:
    """A = θ^{m(q-1)/2} for m ≡ ±1 (mod 6), m in [0, 2(q^2+q+1)), without repeats."""
    q = tower.q
    theta = tower.primitive
    seen: Dict[Tuple[int, ...], TowerElem] = {}
    for m in range(2 * (q * q + q + 1)):
        if m % 6 in (1, 5):
            a = theta ** (m * (q - 1) // 2)
            seen.setdefault(a.coords, a)
    return list(seen.values())


def count_cpp_binomials(tower: Tower, checker: Optional[Any] = None) -> CppCountReport:
    """
    Count the A for which x^{q^2+q-1} + Ax is a complete permutation.

    Raises:
        FieldSpecError: If q ≢ 1 (mod 3)
    """
    q = tower.q
    if q % 3 != 1:
        raise FieldSpecError(
            f"Counting complete binomials needs q ≡ 1 (mod 3); q = {q}",
            "• Use a field such as 7^1 or 13^1",
        )
    if checker is None:
        from src.services.permcheck import ExhaustiveChecker

        checker = ExhaustiveChecker(tower)
    tower.check_budget()

    elements = list(tower.enumerate())
    hypothesis = set()
    for a in elements:
        coeffs = CoeffSet(family="T31", values={"A": a})
        if check_conditions("T31", coeffs, tower).verdict:
            hypothesis.add(a.coords)
    logger.info(f"{tower.describe()}: {len(hypothesis)} A pass the hypotheses")

    perm = checker.binomial_permutation_flags()
    complete = set()
    for i, a in enumerate(elements):
        if perm[i] and perm[tower.index_of(a + tower.one)]:
            complete.add(a.coords)
    parameterized = {a.coords for a in parameterized_binomial_coefficients(tower)}

    report = CppCountReport(
        tower=tower.describe(),
        formula=cpp_formula(q),
        hypothesis_count=len(hypothesis),
        complete_count=len(complete),
        parameterized_count=len(parameterized),
        parameterized_complete=len(parameterized & complete),
        hypothesis_not_parameterized=len(hypothesis - parameterized),
        permutation_count=int(sum(bool(flag) for flag in perm)),
    )
    logger.info(f"{tower.describe()}: complete count {report.complete_count}, formula {report.formula}")
    return report
