"""
Exhaustive permutation checks, coefficient-space search and soundness sweeps.

Every family monomial is x^{d0} (x^q)^{d1} (x^{q^2})^{d2} with digits in
{-1, 0, 1}, so one table of x, its two Frobenius images and their inverses over
the whole field serves every tuple; a tuple costs a few scalings and additions.
Bijectivity is a hit-set over the mixed-radix index of the images.
"""

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from functools import cached_property
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.interfaces.services import IPermutationChecker
from src.lib.exceptions import BudgetExceededError, CoefficientError
from src.lib.logging_config import get_logger
from src.models.entities import (
    CoeffSet,
    CompletenessVerdict,
    PermVerdict,
    SearchResult,
    SweepReport,
)
from src.services.families import (
    Digits,
    check_conditions,
    coefficient_elements,
    coeffs_to_json,
    exponent_digits,
    is_tower_slot,
    slots,
)
from src.services.kernels import TowerArrays
from src.services.tower import Tower, TowerElem, make_tower, parse_field_spec

logger = get_logger(__name__)

DEFAULT_SEARCH_BUDGET = 2 ** 20

MODES = ("conditions_only", "permutations_only", "both")


class MonomialTable:
    """Powers of every field element, in index order, built from Frobenius digit chains."""

    def __init__(self, arrays: TowerArrays) -> None:
        self.arrays = arrays
        self.x = arrays.all_elements()
        self._digits: Dict[Digits, np.ndarray] = {}
        self._powers: Dict[int, np.ndarray] = {}

    @cached_property
    def conjugates(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        y = self.arrays.frobenius(self.x)
        return self.x, y, self.arrays.frobenius(y)

    @cached_property
    def inverses(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        inv = self.arrays.inv(self.x)
        y = self.arrays.frobenius(inv)
        return inv, y, self.arrays.frobenius(y)

    @cached_property
    def ones(self) -> np.ndarray:
        return self.arrays.pow(self.x, 0)

    def digits(self, digits: Digits) -> np.ndarray:
        """x^{d0 + d1 q + d2 q^2}; a -1 digit takes the inverse, with 0 sent to 0."""
        if digits not in self._digits:
            result = None
            for d, conj, inv in zip(digits, self.conjugates, self.inverses):
                if d:
                    factor = conj if d == 1 else inv
                    result = factor if result is None else self.arrays.mul(result, factor)
            self._digits[digits] = self.ones if result is None else result
        return self._digits[digits]

    def power(self, e: int) -> np.ndarray:
        """x^e for an arbitrary exponent e ≥ 0, by square-and-multiply."""
        if e < 0:
            raise CoefficientError(f"Negative exponent {e}")
        order = self.arrays.tower.order3
        if e > 0:
            e = e % order or order
        if e not in self._powers:
            self._powers[e] = self.arrays.pow(self.x, e)
        return self._powers[e]


def _collision(keys: np.ndarray) -> Tuple[int, int]:
    """The first x2 (in index order) whose image was already hit, and that earlier x1."""
    order = np.argsort(keys, kind="stable")
    ranked = keys[order]
    dup = np.nonzero(ranked[1:] == ranked[:-1])[0] + 1
    pos = dup[np.argmin(order[dup])]
    second = int(order[pos])
    first = int(order[np.searchsorted(ranked, ranked[pos])])
    return first, second


class ExhaustiveChecker(IPermutationChecker):
    """
    Bijectivity over all q^3 elements of one tower.

    Raises:
        BudgetExceededError: On construction, if q^3 exceeds the enumeration budget
    """

    def __init__(self, tower: Tower, budget: Optional[int] = None) -> None:
        tower.check_budget(budget)
        self.tower = tower
        self.size = tower.size
        self.arrays = TowerArrays(tower)
        self.table = MonomialTable(self.arrays)
        logger.debug(f"Exhaustive checker ready for {tower.describe()}")

    def _combine(self, terms: Sequence[np.ndarray], coeffs: Sequence[TowerElem]) -> np.ndarray:
        acc = np.zeros_like(self.table.x)
        for term, c in zip(terms, coeffs):
            if c.is_zero:
                continue
            contribution = term if c == self.tower.one else self.arrays.scale(self.arrays.constant(c), term)
            acc = self.arrays.add(acc, contribution)
        return acc

    def values(self, family: str, coeffs: CoeffSet) -> np.ndarray:
        """f(x) for every x in index order."""
        terms = [self.table.digits(d) for d in exponent_digits(family)]
        return self._combine(terms, coefficient_elements(coeffs, self.tower))

    def verdict(self, values: np.ndarray) -> PermVerdict:
        keys = self.arrays.encode(values)
        hits = np.zeros(self.size, dtype=bool)
        hits[keys] = True
        if hits.all():
            return PermVerdict(is_permutation=True, elements_checked=self.size)
        first, second = _collision(keys)
        return PermVerdict(
            is_permutation=False,
            elements_checked=self.size,
            counterexample=(
                list(self.tower.from_index(first).coords),
                list(self.tower.from_index(second).coords),
            ),
        )

    def is_permutation(self, family: str, coeffs: CoeffSet) -> PermVerdict:
        verdict = self.verdict(self.values(family, coeffs))
        logger.debug(f"{family} {coeffs_to_json(coeffs, self.tower)}: permutation={verdict.is_permutation}")
        return verdict

    def is_permutation_raw(self, exps: Sequence[int], coeffs: Sequence[Any]) -> PermVerdict:
        if len(exps) != len(coeffs):
            raise CoefficientError(f"{len(exps)} exponents but {len(coeffs)} coefficients")
        elements = [c if isinstance(c, TowerElem) else self.tower.embed(c) for c in coeffs]
        terms = [self.table.power(e) for e in exps]
        return self.verdict(self._combine(terms, elements))

    def _epsilon(self, epsilon: Optional[Any]) -> TowerElem:
        if epsilon is None:
            return self.tower.one
        return epsilon if isinstance(epsilon, TowerElem) else self.tower.embed(epsilon)

    def _complete(self, values: np.ndarray, epsilon: TowerElem) -> CompletenessVerdict:
        shifted = self.arrays.add(values, self.arrays.scale(self.arrays.constant(epsilon), self.table.x))
        return CompletenessVerdict(
            f=self.verdict(values),
            f_plus_eps=self.verdict(shifted),
            epsilon=epsilon.to_json(),
        )

    def is_complete(self, family: str, coeffs: CoeffSet, epsilon: Optional[Any] = None) -> CompletenessVerdict:
        return self._complete(self.values(family, coeffs), self._epsilon(epsilon))

    def normalize_epsilon(self, family: str, coeffs: CoeffSet, epsilon: Any) -> CompletenessVerdict:
        """
        Verdicts for ε^{-1} f with ε = 1.

        Raises:
            FieldArithmeticError: If ε is zero
        """
        inverse = self._epsilon(epsilon) ** -1
        scaled = self.arrays.scale(self.arrays.constant(inverse), self.values(family, coeffs))
        return self._complete(scaled, self.tower.one)

    def binomial_permutation_flags(self) -> np.ndarray:
        """For every A in index order: does x^{q^2+q-1} + Ax permute?"""
        lead = self.table.digits(exponent_digits("T31")[0])
        flags = np.zeros(self.size, dtype=bool)
        for index in range(self.size):
            a = self.arrays.constant(self.tower.from_index(index))
            values = self.arrays.add(lead, self.arrays.scale(a, self.table.x))
            keys = self.arrays.encode(values)
            hits = np.zeros(self.size, dtype=bool)
            hits[keys] = True
            flags[index] = hits.all()
        logger.info(f"{self.tower.describe()}: {int(flags.sum())} binomials permute")
        return flags


# Coefficient space

def slot_values(family: str, tower: Tower) -> List[List[Any]]:
    """Values each slot ranges over, in encoding order."""
    return [
        list(tower.enumerate()) if is_tower_slot(family, slot) else tower.base_elements()
        for slot in slots(family)
    ]


def search_size(family: str, tower: Tower) -> int:
    return math.prod(tower.size if is_tower_slot(family, s) else tower.q for s in slots(family))


def check_search_budget(family: str, tower: Tower, budget: Optional[int] = None) -> int:
    limit = budget if budget is not None else DEFAULT_SEARCH_BUDGET
    size = search_size(family, tower)
    if size > limit:
        raise BudgetExceededError("search", size, limit)
    return size


def iter_coeffs(family: str, tower: Tower, start: int = 0, stop: Optional[int] = None) -> Iterator[CoeffSet]:
    """Coefficient tuples in mixed-radix order, first slot most significant."""
    names = slots(family)
    for combo in itertools.islice(itertools.product(*slot_values(family, tower)), start, stop):
        yield CoeffSet(family=family, values=dict(zip(names, combo)))


def split_range(total: int, parts: int) -> List[range]:
    """Contiguous disjoint ranges covering [0, total)."""
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    ranges, start = [], 0
    for i in range(parts):
        stop = start + step + (1 if i < extra else 0)
        ranges.append(range(start, stop))
        start = stop
    return ranges


def resolve_workers(workers: int) -> int:
    return workers if workers > 0 else (os.cpu_count() or 1)


def search(
    family: str,
    tower: Tower,
    mode: str = "both",
    checker: Optional[ExhaustiveChecker] = None,
    budget: Optional[int] = None,
) -> Iterator[SearchResult]:
    """
    Stream the coefficient tuples of one family that match mode.

    conditions_only yields tuples passing the hypotheses, permutations_only
    tuples whose polynomial permutes, both yields tuples satisfying either with
    both results attached.

    Raises:
        ValueError: If mode is unknown
        BudgetExceededError: Before the first tuple, if a budget is exceeded
    """
    if mode not in MODES:
        raise ValueError(f"Unknown search mode {mode!r}; expected one of {', '.join(MODES)}")
    size = check_search_budget(family, tower, budget)
    if mode != "conditions_only" and checker is None:
        checker = ExhaustiveChecker(tower, tower.enumeration_budget)
    logger.info(f"{family} over {tower.describe()}: searching {size} tuples ({mode})")
    return _search_stream(family, tower, mode, checker)


def _search_stream(
    family: str, tower: Tower, mode: str, checker: Optional[ExhaustiveChecker]
) -> Iterator[SearchResult]:
    for coeffs in iter_coeffs(family, tower):
        conditions = check_conditions(family, coeffs, tower) if mode != "permutations_only" else None
        verdict = checker.is_permutation(family, coeffs) if checker is not None else None
        if mode == "conditions_only":
            keep = conditions.verdict
        elif mode == "permutations_only":
            keep = verdict.is_permutation
        else:
            keep = conditions.verdict or verdict.is_permutation
        if keep:
            yield SearchResult(coeffs=coeffs_to_json(coeffs, tower), conditions=conditions, verdict=verdict)


# Soundness sweeps

def _sweep_range(family: str, tower: Tower, checker: ExhaustiveChecker, start: int, stop: int) -> Dict[str, Any]:
    partial: Dict[str, Any] = {"total": 0, "passing": [], "violations": []}
    for coeffs in iter_coeffs(family, tower, start, stop):
        partial["total"] += 1
        if not check_conditions(family, coeffs, tower).verdict:
            continue
        verdict = checker.is_permutation(family, coeffs)
        entry = {"coeffs": coeffs_to_json(coeffs, tower), "is_permutation": verdict.is_permutation}
        partial["passing"].append(entry)
        if not verdict.is_permutation:
            partial["violations"].append({**entry, "counterexample": verdict.to_dict()["counterexample"]})
    return partial


def _sweep_chunk(args: Tuple[str, str, int, int, int]) -> Dict[str, Any]:
    """Worker entry point; rebuilds the tower from its spec string."""
    family, spec, budget, start, stop = args
    tower = make_tower(parse_field_spec(spec), budget)
    return _sweep_range(family, tower, ExhaustiveChecker(tower), start, stop)


def soundness_sweep(
    family: str,
    tower: Tower,
    checker: Optional[ExhaustiveChecker] = None,
    budget: Optional[int] = None,
    workers: int = 1,
) -> SweepReport:
    """
    Check every tuple that passes the hypotheses for bijectivity.

    Tuples that pass the hypotheses but do not permute are recorded as
    violations in the report.

    Args:
        family: Family id
        tower: Field tower
        checker: Checker to reuse in the sequential path
        budget: Search budget (tuples)
        workers: Worker processes; 0 means one per CPU, 1 runs in-process

    Raises:
        BudgetExceededError: If either budget is exceeded
    """
    total = check_search_budget(family, tower, budget)
    tower.check_budget()
    workers = resolve_workers(workers)
    ranges = split_range(total, workers)
    logger.info(f"{family} over {tower.describe()}: sweeping {total} tuples on {len(ranges)} worker(s)")

    if len(ranges) == 1:
        partials = [_sweep_range(family, tower, checker or ExhaustiveChecker(tower), 0, total)]
    else:
        spec = tower.spec.to_string()
        jobs = [(family, spec, tower.enumeration_budget, r.start, r.stop) for r in ranges]
        with ProcessPoolExecutor(max_workers=len(ranges)) as pool:
            partials = list(pool.map(_sweep_chunk, jobs))

    report = SweepReport(family=family, tower=tower.describe())
    for partial in partials:
        report.tuples_total += partial["total"]
        report.passing.extend(partial["passing"])
        report.violations.extend(partial["violations"])
    report.tuples_passing_conditions = len(report.passing)
    report.tuples_condition_pass_and_permutation = sum(1 for e in report.passing if e["is_permutation"])

    if report.violations:
        logger.warning(f"{family}: {len(report.violations)} tuple(s) pass the hypotheses but do not permute")
    logger.info(
        f"{family}: {report.tuples_passing_conditions} of {report.tuples_total} tuples pass the hypotheses"
    )
    return report
