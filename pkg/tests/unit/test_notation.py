"""Unit tests for the printed-notation polynomial parser."""

from __future__ import annotations

import pytest

from src.lib.exceptions import NotationError
from src.lib.notation import normalize_notation
from src.services.symbolic.multipoly import VarSet


@pytest.fixture()
def varset() -> VarSet:
    return VarSet(("t", "A", "B", "C"))


def test_normalize_strips_typesetting() -> None:
    assert normalize_notation("A − B \\\\ & + $C$") == "A - B + C"


def test_implicit_multiplication_and_braced_powers(varset: VarSet) -> None:
    f = varset.parse("2AB^{16}C")

    assert f.terms() == [((0, 1, 16, 1), 2)]


def test_parenthesised_factor(varset: VarSet) -> None:
    f = varset.parse("A(C + 1)t^2")
    A, C, t = varset.gen("A"), varset.gen("C"), varset.gen("t")

    assert f == A * C * t ** 2 + A * t ** 2


def test_leading_minus_and_unicode_minus(varset: VarSet) -> None:
    assert varset.parse("−A + B") == varset.parse("-A+B")


def test_explicit_star(varset: VarSet) -> None:
    assert varset.parse("3*A*B") == varset.parse("3AB")


def test_printed_m_t34() -> None:
    m = VarSet(("t", "A", "C")).parse("Ct^3 + A(C + 1)t^2 + A^2t - C")

    assert m.degree("t") == 3
    assert len(m) == 5


@pytest.mark.parametrize("text", ["", "A +", "A + Q", "(A + B", "A^", "A^{2"])
def test_malformed_text_raises(varset: VarSet, text: str) -> None:
    with pytest.raises(NotationError):
        varset.parse(text)


def test_juxtaposed_letters_split_into_variables(varset: VarSet) -> None:
    A, B, C = varset.gen("A"), varset.gen("B"), varset.gen("C")

    assert varset.parse("ABC - AB") == A * B * C - A * B
    assert varset.parse("(A + B)^2") == A ** 2 + 2 * A * B + B ** 2


@pytest.mark.parametrize("text", ["A/2", "1/A", "0.5A"])
def test_non_integer_polynomials_raise(varset: VarSet, text: str) -> None:
    with pytest.raises(NotationError):
        varset.parse(text)


def test_unknown_variable_is_named(varset: VarSet) -> None:
    with pytest.raises(NotationError, match="Q"):
        varset.parse("A + Q")
