"""
Resultants and pseudo-remainders with respect to one variable.

Polynomials are split into dense coefficient lists in the eliminated variable;
each coefficient is a sparse ring element in the remaining variables. Small
cases take the Sylvester determinant by fraction-free Bareiss elimination,
larger ones the subresultant polynomial remainder sequence. Both use the actual
degrees in the variable as formal degrees.
"""

from typing import Any, List

from src.lib.exceptions import DegreeError, PolynomialError
from src.lib.logging_config import get_logger
from src.services.symbolic.multipoly import MultiPoly, common_varset

logger = get_logger(__name__)

# Both degrees at least this large switch to the remainder sequence
PRS_THRESHOLD = 3

Dense = List[Any]


def _split(f: MultiPoly, var: str) -> Dense:
    return [c.element for c in f.coefficients(var)]


def _join(coeffs: Dense, f: MultiPoly, var: str) -> MultiPoly:
    v = f.varset.gen(var).element
    acc = f.varset.ring.zero
    for c in reversed(coeffs):
        acc = acc * v + c
    return MultiPoly(f.varset, acc)


def _trim(coeffs: Dense) -> Dense:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _prem(f: Dense, g: Dense) -> Dense:
    """Fraction-free pseudo-remainder on dense coefficient lists (low-to-high)."""
    df, dg = len(f) - 1, len(g) - 1
    if df < dg:
        return list(f)
    lc = g[-1]
    e = df - dg + 1
    r = list(f)
    while len(r) - 1 >= dg:
        shift = len(r) - 1 - dg
        lead = r[-1]
        r = [lc * c for c in r]
        for i, c in enumerate(g):
            r[i + shift] = r[i + shift] - lead * c
        _trim(r)
        e -= 1
        if not r:
            return r
    factor = lc ** e
    return [factor * c for c in r]


def _check_degrees(f: MultiPoly, g: MultiPoly, var: str, need_f: bool) -> None:
    if g.degree(var) < 1:
        raise DegreeError(f"{g.to_text()} is constant in {var}")
    if need_f and f.degree(var) < 1:
        raise DegreeError(f"{f.to_text()} is constant in {var}")


def pseudo_rem(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """
    lc(g)^(deg f - deg g + 1) * f modulo g, with every division fraction-free.

    Raises:
        DegreeError: If g is constant in var
    """
    common_varset(f, g)
    _check_degrees(f, g, var, need_f=False)
    return _join(_prem(_split(f, var), _split(g, var)), f, var)


def sylvester_matrix(f: MultiPoly, g: MultiPoly, var: str) -> List[List[MultiPoly]]:
    """Sylvester matrix of f and g in var, rows of f first, highest degree leftmost."""
    common_varset(f, g)
    _check_degrees(f, g, var, need_f=True)
    varset = f.varset
    return [
        [MultiPoly(varset, c) for c in row]
        for row in _sylvester_rows(_split(f, var), _split(g, var), varset.ring.zero)
    ]


def _sylvester_rows(a: Dense, b: Dense, zero: Any) -> List[Dense]:
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    return rows


def _bareiss_det(matrix: List[Dense], one: Any) -> Any:
    """Fraction-free determinant; every intermediate division is exact."""
    mat = [list(row) for row in matrix]
    n = len(mat)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if not mat[k][k]:
            for i in range(k + 1, n):
                if mat[i][k]:
                    mat[k], mat[i] = mat[i], mat[k]
                    sign = -sign
                    break
            else:
                return one * 0
        pivot = mat[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (pivot * mat[i][j] - mat[i][k] * mat[k][j]).exquo(prev)
        prev = pivot
    return mat[n - 1][n - 1] * sign


def _subresultant(a: Dense, b: Dense, one: Any) -> Any:
    """Resultant by the subresultant remainder sequence; len(a) >= len(b) is not required."""
    da, db = len(a) - 1, len(b) - 1
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            s = -1
    g = one
    h = one
    while True:
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        a = b
        if not r:
            return one * 0
        divisor = g * h ** delta
        b = [c.exquo(divisor) for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).exquo(h ** (delta - 1))
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            break
    lead = b[-1]
    if da == 1:
        return lead * s
    return (lead ** da).exquo(h ** (da - 1)) * s


def resultant(f: MultiPoly, g: MultiPoly, var: str, method: str = "auto") -> MultiPoly:
    """
    Resultant of f and g with respect to var.

    Args:
        f, g: Polynomials of positive degree in var over one VarSet
        var: Variable to eliminate
        method: "auto", "bareiss" or "prs"

    Raises:
        DegreeError: If f or g is constant in var
    """
    varset = common_varset(f, g)
    _check_degrees(f, g, var, need_f=True)
    a, b = _split(f, var), _split(g, var)
    one = varset.ring.one
    if method == "auto":
        method = "prs" if min(len(a), len(b)) - 1 >= PRS_THRESHOLD else "bareiss"
    logger.debug(f"Resultant in {var}: degrees {len(a) - 1} and {len(b) - 1} via {method}")
    if method == "bareiss":
        value = _bareiss_det(_sylvester_rows(a, b, varset.ring.zero), one)
    elif method == "prs":
        value = _subresultant(a, b, one)
    else:
        raise PolynomialError(f"Unknown resultant method {method!r}")
    return MultiPoly(varset, value)
