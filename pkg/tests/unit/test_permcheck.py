"""Unit tests for exhaustive permutation checks, search and soundness sweeps."""

from __future__ import annotations

import numpy as np
import pytest

from src.lib.exceptions import BudgetExceededError, CoefficientError, FieldArithmeticError
from src.models.entities import FieldSpec
from src.services.families import evaluate, evaluate_raw, parse_coeffs
from src.services.permcheck import (
    ExhaustiveChecker,
    iter_coeffs,
    resolve_workers,
    search,
    search_size,
    soundness_sweep,
    split_range,
)
from src.services.tower import Tower, make_tower, parse_field_spec


@pytest.fixture(scope="module")
def tower5() -> Tower:
    return make_tower(FieldSpec(p=5))


@pytest.fixture(scope="module")
def tower7() -> Tower:
    return make_tower(FieldSpec(p=7))


@pytest.fixture(scope="module")
def checker5(tower5: Tower) -> ExhaustiveChecker:
    return ExhaustiveChecker(tower5)


@pytest.fixture(scope="module")
def checker7(tower7: Tower) -> ExhaustiveChecker:
    return ExhaustiveChecker(tower7)


def test_identity_permutes(checker5: ExhaustiveChecker) -> None:
    verdict = checker5.is_permutation_raw([1], [1])

    assert verdict.is_permutation
    assert verdict.elements_checked == 125
    assert verdict.counterexample is None


def test_square_collides(tower5: Tower, checker5: ExhaustiveChecker) -> None:
    verdict = checker5.is_permutation_raw([2], [1])

    assert not verdict.is_permutation
    first, second = (tower5.element(c) for c in verdict.counterexample)
    assert first != second
    assert first * first == second * second


def test_counterexample_is_first_repeated_image(tower5: Tower, checker5: ExhaustiveChecker) -> None:
    verdict = checker5.is_permutation_raw([2], [1])
    first, second = (tower5.index_of(tower5.element(c)) for c in verdict.counterexample)
    images = [tower5.from_index(i) ** 2 for i in range(second)]

    assert first < second
    assert len({x.coords for x in images}) == second
    assert tower5.from_index(second) ** 2 == tower5.from_index(first) ** 2


def test_raw_rejects_mismatched_lengths(checker5: ExhaustiveChecker) -> None:
    with pytest.raises(CoefficientError):
        checker5.is_permutation_raw([1, 2], [1])


def test_raw_rejects_negative_exponent(checker5: ExhaustiveChecker) -> None:
    with pytest.raises(CoefficientError, match="Negative exponent"):
        checker5.is_permutation_raw([-1], [1])


def test_t33_row_permutes(tower5: Tower, checker5: ExhaustiveChecker) -> None:
    coeffs = parse_coeffs("T33", {"A": 2, "B": 3}, tower5)

    assert checker5.is_permutation("T33", coeffs).is_permutation


@pytest.mark.parametrize(
    ("family", "values"),
    [
        ("T33", {"A": 2, "B": 3}),
        ("T36", {"A": 1, "B": 2, "C": 3}),
        ("T38", {"A": 4, "B": 1, "C": 2}),
        ("T310", {"A": 4, "B": 1, "C": 2, "D": 3}),
        ("T31", {"A": [1, 2, 3]}),
    ],
)
def test_table_values_agree_with_scalar_evaluation(
    tower5: Tower, checker5: ExhaustiveChecker, family: str, values: dict
) -> None:
    coeffs = parse_coeffs(family, values, tower5)
    keys = checker5.arrays.encode(checker5.values(family, coeffs))

    for index in range(0, tower5.size, 3):
        x = tower5.from_index(index)
        assert keys[index] == tower5.index_of(evaluate(family, coeffs, x, tower5))


def test_power_table_agrees_with_digit_table(tower5: Tower, checker5: ExhaustiveChecker) -> None:
    coeffs = parse_coeffs("T36", {"A": 1, "B": 2, "C": 3}, tower5)
    exps = [29, 25, 5, 1]
    via_digits = checker5.values("T36", coeffs)
    via_powers = checker5._combine(
        [checker5.table.power(e) for e in exps], [tower5.one, tower5.embed(1), tower5.embed(2), tower5.embed(3)]
    )

    assert np.array_equal(via_digits, via_powers)
    assert checker5.is_permutation_raw(exps, [1, 1, 2, 3]).is_permutation == checker5.is_permutation(
        "T36", coeffs
    ).is_permutation


def test_raw_agrees_with_scalar_evaluation(tower5: Tower, checker5: ExhaustiveChecker) -> None:
    verdict = checker5.is_permutation_raw([7, 1], [1, 2])
    images = {evaluate_raw([7, 1], [tower5.one, tower5.embed(2)], x, tower5).coords for x in tower5.enumerate()}

    assert verdict.is_permutation == (len(images) == 125)


def test_binomial_row_is_complete(tower7: Tower, checker7: ExhaustiveChecker) -> None:
    coeffs = parse_coeffs("T31", {"A": 3}, tower7)
    verdict = checker7.is_complete("T31", coeffs)

    assert verdict.f.is_permutation
    assert verdict.f_plus_eps.is_permutation
    assert verdict.is_complete
    assert verdict.epsilon == [1, 0, 0]


@pytest.mark.parametrize("epsilon", [1, 2, 5])
def test_normalized_epsilon_matches_direct_check(tower7: Tower, checker7: ExhaustiveChecker, epsilon: int) -> None:
    coeffs = parse_coeffs("T31", {"A": 3}, tower7)

    direct = checker7.is_complete("T31", coeffs, epsilon=epsilon)
    normalized = checker7.normalize_epsilon("T31", coeffs, epsilon)

    assert normalized.is_complete == direct.is_complete
    assert normalized.epsilon == [1, 0, 0]


def test_normalize_epsilon_rejects_zero(tower7: Tower, checker7: ExhaustiveChecker) -> None:
    coeffs = parse_coeffs("T31", {"A": 3}, tower7)

    with pytest.raises(FieldArithmeticError):
        checker7.normalize_epsilon("T31", coeffs, 0)


def test_binomial_flags(tower7: Tower, checker7: ExhaustiveChecker) -> None:
    flags = checker7.binomial_permutation_flags()

    assert flags.shape == (343,)
    assert flags[tower7.index_of(tower7.embed(3))]
    # x^{q^2+q-1} permutes iff gcd(q^2+q-1, q^3-1) = 1; at q = 7 that gcd is 1
    assert flags[0]


def test_checker_enforces_enumeration_budget(tower5: Tower) -> None:
    with pytest.raises(BudgetExceededError, match="exceeds budget 100"):
        ExhaustiveChecker(tower5, budget=100)


# Coefficient space

def test_iter_coeffs_order(tower5: Tower) -> None:
    tuples = list(iter_coeffs("T33", tower5))

    assert len(tuples) == 25 == search_size("T33", tower5)
    assert tuples[0].values == {"A": (0,), "B": (0,)}
    assert tuples[1].values == {"A": (0,), "B": (1,)}
    assert tuples[5].values == {"A": (1,), "B": (0,)}


def test_iter_coeffs_range(tower5: Tower) -> None:
    assert [c.values for c in iter_coeffs("T33", tower5, 5, 7)] == [
        {"A": (1,), "B": (0,)},
        {"A": (1,), "B": (1,)},
    ]


def test_search_size_tower_slot(tower5: Tower) -> None:
    assert search_size("T31", tower5) == 125
    assert search_size("T310", tower5) == 625


def test_split_range_covers_total() -> None:
    assert split_range(10, 3) == [range(0, 4), range(4, 7), range(7, 10)]
    assert split_range(2, 8) == [range(0, 1), range(1, 2)]
    assert split_range(5, 1) == [range(0, 5)]


def test_resolve_workers(mocker) -> None:
    mocker.patch("src.services.permcheck.os.cpu_count", return_value=6)

    assert resolve_workers(0) == 6
    assert resolve_workers(3) == 3


def test_search_conditions_only_t34_is_empty(tower5: Tower) -> None:
    assert list(search("T34", tower5, "conditions_only")) == []


def test_search_both_keeps_permutations_failing_hypotheses(tower5: Tower, checker5: ExhaustiveChecker) -> None:
    results = list(search("T33", tower5, "both", checker=checker5))
    match = next(r for r in results if r.coeffs == {"A": 2, "B": 3})

    assert match.verdict.is_permutation
    assert not match.conditions.verdict
    assert all(r.conditions.verdict or r.verdict.is_permutation for r in results)
    assert set(match.to_dict()) == {"coeffs", "conditions", "permutation"}


def test_search_permutations_only(tower5: Tower, checker5: ExhaustiveChecker) -> None:
    results = list(search("T33", tower5, "permutations_only", checker=checker5))

    assert {"A": 2, "B": 3} in [r.coeffs for r in results]
    assert all(r.conditions is None and r.verdict.is_permutation for r in results)


def test_search_rejects_unknown_mode(tower5: Tower) -> None:
    with pytest.raises(ValueError, match="Unknown search mode"):
        search("T33", tower5, "everything")


def test_search_budget_checked_before_first_tuple(tower5: Tower) -> None:
    with pytest.raises(BudgetExceededError, match="search size 625"):
        search("T310", tower5, budget=100)


def test_sweep_t33_is_sound(tower5: Tower, checker5: ExhaustiveChecker) -> None:
    report = soundness_sweep("T33", tower5, checker=checker5)

    assert report.tuples_total == 25
    assert report.sound
    assert report.tuples_passing_conditions == len(report.passing)
    assert report.tuples_condition_pass_and_permutation == report.tuples_passing_conditions


def test_sweep_t34_has_nothing_to_check(tower5: Tower, checker5: ExhaustiveChecker) -> None:
    report = soundness_sweep("T34", tower5, checker=checker5)

    assert report.tuples_total == 25
    assert report.tuples_passing_conditions == 0
    assert report.sound


def test_sweep_records_violations(tower5: Tower, checker5: ExhaustiveChecker, mocker) -> None:
    mocker.patch("src.services.permcheck.check_conditions", return_value=mocker.Mock(verdict=True))

    report = soundness_sweep("T33", tower5, checker=checker5)

    assert report.tuples_passing_conditions == 25
    assert not report.sound
    # x^21 alone permutes F_125; x^21 - x sends 0 and 1 to 0
    assert {"A": 0, "B": 0} not in [v["coeffs"] for v in report.violations]
    assert {"A": 0, "B": 4} in [v["coeffs"] for v in report.violations]
    assert all(len(v["counterexample"]) == 2 for v in report.violations)


@pytest.mark.slow
def test_parallel_sweep_matches_sequential(tower5: Tower) -> None:
    sequential = soundness_sweep("T36", tower5, workers=1)
    parallel = soundness_sweep("T36", tower5, workers=2)

    assert parallel.to_dict() == sequential.to_dict()


SOUND_GRID = [
    ("T33", 5),
    ("T36", 5),
    ("T37", 5),
    ("T310", 5),
    ("T35", 7),
    ("T38", 11),
    ("T39", 11),
    ("T34", 13),
]


@pytest.mark.slow
@pytest.mark.parametrize(("family", "p"), SOUND_GRID)
def test_sweep_grid_is_sound(family: str, p: int) -> None:
    report = soundness_sweep(family, make_tower(FieldSpec(p=p)))

    assert report.sound
    assert report.tuples_condition_pass_and_permutation == report.tuples_passing_conditions


@pytest.mark.slow
def test_t31_sweep_at_q7_finds_three_non_permutations(tower7: Tower) -> None:
    report = soundness_sweep("T31", tower7)

    assert report.tuples_total == 343
    assert report.tuples_passing_conditions == 7
    assert len(report.violations) == 3
    assert report.tuples_condition_pass_and_permutation == 4
    assert all(not v["is_permutation"] and len(v["counterexample"]) == 2 for v in report.violations)


def test_verdicts_do_not_depend_on_the_cubic_modulus(tower5: Tower, checker5: ExhaustiveChecker) -> None:
    other = make_tower(parse_field_spec("5^1::1,2,0,1"))
    other_checker = ExhaustiveChecker(other)

    default = [r.coeffs for r in search("T33", tower5, "permutations_only", checker=checker5)]
    alternative = [r.coeffs for r in search("T33", other, "permutations_only", checker=other_checker)]

    assert other.h != tower5.h
    assert alternative == default
