"""
Parser for polynomials written the way they are typeset in print.

Text is handed to sympy's expression parser with implicit multiplication
and '^' powers enabled, after braces are mapped to parentheses and
typesetting residue (unicode minus, &, \\\\, $) is stripped. Juxtaposed
single-letter names such as "AB" split into products of ring variables.

Example:
    >>> R, = ...  # any sympy PolyRing over ZZ
    >>> parse_notation("Ct^3 + A(C + 1)t^2 + A^2t - C", R)
"""

import re
from tokenize import TokenError
from typing import Any, Dict, Tuple

from sympy import Float, Function, Integer, Poly, Rational, Symbol, ZZ
from sympy.core.sympify import SympifyError
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import BasePolynomialError

from src.lib.exceptions import NotationError

_CLEANUPS: Tuple[Tuple[str, str], ...] = (
    ("−", "-"),
    ("·", "*"),
    ("\\cdot", "*"),
    ("\\\\", " "),
    ("&", " "),
    ("$", " "),
)

_TRANSFORMATIONS = standard_transformations + (implicit_multiplication_application, convert_xor)

# Only what the transformations emit; every other name becomes a Symbol
_GLOBALS: Dict[str, Any] = {
    "Integer": Integer,
    "Float": Float,
    "Rational": Rational,
    "Symbol": Symbol,
    "Function": Function,
}


def normalize_notation(text: str) -> str:
    """Strip typesetting residue and unify operator glyphs."""
    for old, new in _CLEANUPS:
        text = text.replace(old, new)
    return re.sub(r"\s+", " ", text).strip()


def parse_notation(text: str, ring: Any) -> Any:
    """
    Parse printed polynomial text into an element of a sympy PolyRing.

    Args:
        text: Polynomial in printed notation
        ring: sympy.polys.rings.PolyRing whose generators name the variables

    Returns:
        PolyElement of ring

    Raises:
        NotationError: If the text is malformed, uses unknown variables or
            has non-integer coefficients
    """
    source = normalize_notation(text).replace("{", "(").replace("}", ")")
    if not source:
        raise NotationError("Empty polynomial text")

    symbols = {str(sym): Symbol(str(sym)) for sym in ring.symbols}
    try:
        expr = parse_expr(
            source,
            local_dict=dict(symbols),
            global_dict=dict(_GLOBALS),
            transformations=_TRANSFORMATIONS,
        )
    except (SympifyError, TokenError, SyntaxError, TypeError, ValueError, IndexError) as e:
        raise NotationError(f"Cannot parse {_excerpt(source)!r}: {e}") from e

    unknown = sorted(str(s) for s in getattr(expr, "free_symbols", ()) if str(s) not in symbols)
    if unknown:
        raise NotationError(f"Unknown variable(s) {', '.join(unknown)} in {_excerpt(source)!r}")

    gens = [symbols[str(sym)] for sym in ring.symbols]
    try:
        poly = Poly(expr, *gens, domain=ZZ)
    except (BasePolynomialError, TypeError, ValueError) as e:
        raise NotationError(f"Not an integer polynomial: {_excerpt(source)!r}: {e}") from e
    return ring.from_dict({monom: int(coeff) for monom, coeff in poly.terms()})


def _excerpt(source: str, width: int = 40) -> str:
    return source if len(source) <= width else source[:width] + "..."
