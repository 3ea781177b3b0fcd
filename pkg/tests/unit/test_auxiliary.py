"""Unit tests for the second-case eliminants of T38 and T39."""

from __future__ import annotations

import pytest

from src.lib.exceptions import UnknownTheoremError
from src.services.symbolic.auxiliary import (
    SECOND_CASES,
    derive_named,
    derive_second_case,
    relation_polynomial,
    second_case,
    substitute_root,
)
from src.services.symbolic.multipoly import VarSet


def test_second_cases_name_printed_forms() -> None:
    assert sorted(SECOND_CASES) == ["r1_T38", "r1_T39", "r2_T39"]
    assert second_case("r1_T38").theorem == "T38"
    assert second_case("r2_T39").reparametrize == (("A", "-A^2"),)


def test_unknown_second_case() -> None:
    with pytest.raises(UnknownTheoremError):
        second_case("r3_T39")


def test_substitute_root_clears_to_common_degree() -> None:
    varset = VarSet(("x", "y", "a", "b", "C"))
    f = varset.parse("xy - ax")
    roots = {"x": varset.gen("a"), "y": varset.gen("b")}

    assert substitute_root(f, roots, varset.gen("C")) == varset.parse("ab - a^2C")


def test_relation_polynomial_t38_is_linear_in_b() -> None:
    varset = VarSet(("A", "B", "C"))
    relation = relation_polynomial("T38", varset)

    assert relation == varset.parse("A^3 - ABC + AB + C^2 - C + 1")
    assert relation.degree("B") == 1


def test_derive_named_dispatches_to_derive_m() -> None:
    assert derive_named("m_T34").name == "m_T34"
    assert derive_named("m_T39").theorem == "T39"


@pytest.mark.parametrize("name", ["r_T99", "m_T99"])
def test_derive_named_unknown(name: str) -> None:
    with pytest.raises(UnknownTheoremError):
        derive_named(name)


@pytest.mark.slow
def test_r1_t38_is_a_nonzero_polynomial_in_a_and_c() -> None:
    derived = derive_second_case("r1_T38")

    assert not derived.poly.is_zero
    assert set(derived.poly.variables()) <= {"A", "C"}
    assert derived.match in ("exact", "proportional", "mismatch")
    assert derived.note.startswith("x = (-Bb) / (2C)")


@pytest.mark.slow
@pytest.mark.parametrize("name", ["r1_T39", "r2_T39"])
def test_t39_second_cases_are_polynomials_in_a_and_b(name: str) -> None:
    derived = derive_second_case(name)

    assert not derived.poly.is_zero
    assert set(derived.poly.variables()) <= {"A", "B"}
    assert "A -> -A^2" in derived.note
