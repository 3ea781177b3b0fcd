"""Executable contract tests for IPermutationChecker using ExhaustiveChecker."""

from __future__ import annotations

import pytest

from src.interfaces.services import IPermutationChecker
from src.lib.exceptions import BudgetExceededError
from src.models.entities import CompletenessVerdict, FieldSpec, PermVerdict
from src.services.families import parse_coeffs
from src.services.permcheck import ExhaustiveChecker
from src.services.tower import Tower, make_tower


@pytest.fixture(scope="module")
def tower() -> Tower:
    return make_tower(FieldSpec(p=5))


@pytest.fixture(scope="module")
def checker_implementation(tower: Tower) -> ExhaustiveChecker:
    return ExhaustiveChecker(tower)


def test_interface_inheritance(checker_implementation: ExhaustiveChecker) -> None:
    assert isinstance(checker_implementation, IPermutationChecker)


def test_is_permutation_returns_verdict(checker_implementation: ExhaustiveChecker, tower: Tower) -> None:
    verdict = checker_implementation.is_permutation("T33", parse_coeffs("T33", {"A": 2, "B": 3}, tower))

    assert isinstance(verdict, PermVerdict)
    assert verdict.elements_checked == tower.size
    assert verdict.to_dict() == {"is_permutation": True, "elements_checked": 125}


def test_failed_verdict_carries_distinct_colliding_pair(
    checker_implementation: ExhaustiveChecker, tower: Tower
) -> None:
    verdict = checker_implementation.is_permutation("T33", parse_coeffs("T33", {"A": 0, "B": 4}, tower))

    assert not verdict.is_permutation
    first, second = verdict.to_dict()["counterexample"]
    assert first != second
    assert len(first) == len(second) == 3


def test_is_permutation_raw_accepts_integers(checker_implementation: ExhaustiveChecker) -> None:
    assert checker_implementation.is_permutation_raw([3], [1]).is_permutation


def test_is_complete_returns_both_verdicts(checker_implementation: ExhaustiveChecker, tower: Tower) -> None:
    verdict = checker_implementation.is_complete("T33", parse_coeffs("T33", {"A": 2, "B": 3}, tower))

    assert isinstance(verdict, CompletenessVerdict)
    assert set(verdict.to_dict()) == {"f", "f_plus_eps", "epsilon", "is_complete"}
    assert verdict.f.is_permutation


def test_construction_respects_enumeration_budget(tower: Tower) -> None:
    with pytest.raises(BudgetExceededError):
        ExhaustiveChecker(tower, budget=tower.size - 1)
