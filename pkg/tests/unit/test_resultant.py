"""Unit tests for resultants, Sylvester matrices and pseudo-remainders."""

from __future__ import annotations

import random

import pytest

from src.lib.exceptions import DegreeError, PolynomialError, VarSetMismatchError
from src.services.symbolic.multipoly import MultiPoly, VarSet
from src.services.symbolic.resultant import pseudo_rem, resultant, sylvester_matrix


@pytest.fixture()
def xAB() -> VarSet:
    return VarSet(("x", "A", "B"))


def test_resultant_of_linear_polynomials(xAB: VarSet) -> None:
    assert resultant(xAB.parse("x - 1"), xAB.parse("x + 1"), "x") == 2


def test_pseudo_remainder_scales_by_leading_coefficient(xAB: VarSet) -> None:
    assert pseudo_rem(xAB.parse("x^2 + 1"), xAB.parse("2x"), "x") == 4


def test_pseudo_remainder_of_lower_degree_is_identity(xAB: VarSet) -> None:
    f = xAB.parse("Ax + B")

    assert pseudo_rem(f, xAB.parse("x^2 + A"), "x") == f


@pytest.mark.parametrize("method", ["bareiss", "prs", "auto"])
def test_resultant_with_derivative_is_discriminant(xAB: VarSet, method: str) -> None:
    f = xAB.parse("x^3 + Ax + B")
    df = xAB.parse("3x^2 + A")

    assert resultant(f, df, "x", method=method) == xAB.parse("4A^3 + 27B^2")


@pytest.mark.parametrize("method", ["bareiss", "prs"])
def test_resultant_of_two_cubics(xAB: VarSet, method: str) -> None:
    value = resultant(xAB.parse("x^3 + A"), xAB.parse("x^3 + B"), "x", method=method)

    assert value == xAB.parse("(B - A)^3")


def test_resultant_is_antisymmetric_for_odd_degrees(xAB: VarSet) -> None:
    f, g = xAB.parse("x^3 + Ax + 1"), xAB.parse("Bx + 2")

    assert resultant(f, g, "x") == -resultant(g, f, "x")


def test_sylvester_matrix_layout(xAB: VarSet) -> None:
    matrix = sylvester_matrix(xAB.parse("x^2 + 1"), xAB.parse("x + 2"), "x")

    assert [[int(c == 0) for c in row] for row in matrix] == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    assert matrix[1][1] == 2
    assert matrix[2][2] == 2


def test_resultant_rejects_constant_input(xAB: VarSet) -> None:
    with pytest.raises(DegreeError):
        resultant(xAB.parse("x + 1"), xAB.gen("A"), "x")


def test_resultant_rejects_unknown_method(xAB: VarSet) -> None:
    with pytest.raises(PolynomialError, match="Unknown resultant method"):
        resultant(xAB.parse("x + 1"), xAB.parse("x - 1"), "x", method="magic")


def test_resultant_requires_one_varset(xAB: VarSet) -> None:
    other = VarSet(("x", "C"))

    with pytest.raises(VarSetMismatchError):
        resultant(xAB.parse("x + 1"), other.parse("x + C"), "x")


def _random_poly(rng: random.Random, varset: VarSet, with_a: bool) -> MultiPoly:
    degree = rng.randint(1, 3)
    terms = [((degree, 0), rng.choice([-2, -1, 1, 2, 3]))]
    for e in range(degree):
        terms.append(((e, 0), rng.randint(-3, 3)))
        if with_a and rng.random() < 0.3:
            terms.append(((e, 1), rng.randint(-2, 2)))
    return varset.from_terms(terms)


def test_resultant_vanishes_exactly_on_common_factors() -> None:
    rng = random.Random(20240617)
    varset = VarSet(("x", "A"))
    vanishing = 0
    for _ in range(200):
        f, g = _random_poly(rng, varset, False), _random_poly(rng, varset, False)
        if rng.random() < 0.5:
            shared = varset.from_terms([((1, 0), 1), ((0, 0), rng.randint(-3, 3))])
            f, g = f * shared, g * shared
        common = MultiPoly(varset, f.element.gcd(g.element))

        res = resultant(f, g, "x")

        assert res.is_zero == (common.degree("x") > 0)
        vanishing += res.is_zero
    assert vanishing >= 50


@pytest.mark.parametrize("method", ["bareiss", "prs"])
def test_resultant_is_multiplicative_in_the_first_argument(method: str) -> None:
    rng = random.Random(7 if method == "prs" else 11)
    varset = VarSet(("x", "A"))
    for _ in range(25):
        f, g, h = (_random_poly(rng, varset, True) for _ in range(3))

        product = resultant(f * g, h, "x", method=method)

        assert product == resultant(f, h, "x", method=method) * resultant(g, h, "x", method=method)
