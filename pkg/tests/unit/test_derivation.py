"""Unit tests for the derivation of the auxiliary polynomials."""

from __future__ import annotations

import pytest

from src.lib.exceptions import UnknownTheoremError
from src.services.symbolic.derivation import (
    classify_by_division,
    compare_with_printed,
    derivable_theorems,
    derivation_varset,
    derive_m,
    derived_name,
    eliminate_linear,
    printed_polynomial,
    product_relation,
    q_power_image,
    strip_common,
)
from src.services.symbolic.multipoly import VarSet, exact_div, parameter_content

R_T38_FIRST_FACTOR = (
    "3A^9C^2 - 2A^9C + 11A^6C^4 - 17A^6C^3 + 7A^6C^2 + 6A^6C - 4A^6 + A^3C^8 - A^3C^7"
    " + 6A^3C^6 - 17A^3C^5 + 23A^3C^4 - 12A^3C^3 + 3A^3C^2 + C^8 - 3C^7 + 6C^6 - 7C^5"
    " + 6C^4 - 3C^3 + C^2"
)


def test_derivable_theorems() -> None:
    assert derivable_theorems() == ("T34", "T35", "T36", "T37", "T38", "T39", "T310")
    assert derived_name("T38") == "r_T38"
    assert derived_name("T36") == "m_T36"
    assert derived_name("T31") is None


def test_product_relation_t34_is_c_times_m() -> None:
    varset = derivation_varset("T34")
    m = printed_polynomial("m_T34").change_varset(varset)

    assert product_relation("T34") == varset.gen("C") * m


def test_q_power_image_of_t_is_conjugate_map() -> None:
    varset = derivation_varset("T34")

    assert q_power_image(varset.gen("t"), "T34") == varset.parse("-C")


@pytest.mark.parametrize("theorem", ["T34", "T35", "T36", "T37"])
def test_derived_m_matches_printed_exactly(theorem: str) -> None:
    derived = derive_m(theorem)

    assert derived.match == "exact"
    assert derived.matches_printed
    assert derived.poly.degree("t") == 3
    assert derived.name == f"m_{theorem}"
    assert "product" in derived.stages


def test_derived_t34_equals_printed_form() -> None:
    derived = derive_m("T34")
    printed = printed_polynomial("m_T34").change_varset(derived.poly.varset)

    assert derived.poly * derived.sign == printed


def test_compare_with_printed_detects_sign_and_scale() -> None:
    varset = derivation_varset("T34")
    m = printed_polynomial("m_T34").change_varset(varset)

    assert compare_with_printed(-m, m, [], 100) == ("exact", -1)
    assert compare_with_printed(2 * m, m, [], 100) == ("proportional", 1)
    assert compare_with_printed(m + 1, m, [], 100)[0] == "mismatch"


def test_derive_unknown_theorem() -> None:
    with pytest.raises(UnknownTheoremError):
        derive_m("T31")


def test_printed_unknown_name() -> None:
    with pytest.raises(UnknownTheoremError):
        printed_polynomial("m_T99")


def test_derived_t37_has_no_parameter_content() -> None:
    derived = derive_m("T37")

    assert derived.match == "exact"
    assert parameter_content(derived.poly, "t").is_constant


def test_derived_t39_leading_coefficient() -> None:
    derived = derive_m("T39")
    lead = dict(derived.poly.coefficients("t")[3].terms())

    assert derived.poly.degree("t") == 3
    assert lead[(0, 2, 16, 0)] == 1
    assert lead[(0, 0, 0, 6)] == -1


def test_t38_product_relation_is_the_quartic() -> None:
    varset = derivation_varset("T38")
    quartic = varset.parse("A^2t^4 + (2AB - ABC + C^3)t^3 + (2A + AC^2 - B^2C + B^2)t^2 + (2B - BC)t + 1")
    printed = printed_polynomial("q_T38")

    assert product_relation("T38") == -quartic
    assert printed.degree("u") == 4
    assert len(printed) == len(quartic)


def test_eliminate_linear_clears_the_denominator() -> None:
    varset = VarSet(("A", "B"))
    f = varset.parse("B^2 + A")

    cleared = eliminate_linear(f, "B", varset.gen("A"), varset.parse("A + 1"))

    assert cleared == varset.parse("A^2 + A(A + 1)^2")
    assert eliminate_linear(varset.gen("A"), "B", varset.gen("A"), varset.const(2)) == varset.gen("A")


def test_strip_common_removes_every_shared_factor() -> None:
    varset = VarSet(("A", "C"))
    f = varset.parse("(A + 1)^2(A - 1)")

    stripped, removed = strip_common(f, varset.parse("(A + 1)C"))

    assert stripped == varset.parse("A - 1")
    assert removed == varset.parse("(A + 1)^2")


def test_classify_by_division() -> None:
    varset = VarSet(("A", "C"))
    printed = varset.parse("A^3 + C^2 - C + 1")

    assert classify_by_division(-printed, printed) == ("exact", -1, None)
    match, sign, cofactor = classify_by_division(printed * varset.parse("A + C"), printed)
    assert (match, sign, cofactor) == ("proportional", 1, varset.parse("A + C"))
    assert classify_by_division(printed + 1, printed)[0] == "mismatch"


@pytest.mark.slow
def test_derived_r_t38_carries_the_printed_first_factor() -> None:
    derived = derive_m("T38")
    first = derived.poly.varset.parse(R_T38_FIRST_FACTOR)
    terms = dict(first.terms())

    cofactor = exact_div(derived.poly, first)

    assert terms[(9, 2)] == 3
    assert terms[(9, 1)] == -2
    assert not cofactor.is_zero
    assert derived.poly.variables() == ("A", "C")
    assert derived.matches_printed
    assert "eliminant" in derived.stages
