"""
Sparse multivariate integer polynomials over a named variable set.

MultiPoly wraps an element of a sympy ZZ polynomial ring in graded-lex order.
The wrapper pins the VarSet, serializes deterministically and adds the
operations the elimination pipelines need: exact division, monomial
substitution rewriting, content removal and evaluation into a finite field.
"""

from functools import reduce
from math import gcd
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring as poly_ring

from src.lib.exceptions import (
    InexactDivisionError,
    PolynomialError,
    RewriteLimitError,
    UnassignedVariableError,
    VarSetMismatchError,
)
from src.lib.logging_config import get_logger
from src.lib.notation import parse_notation

logger = get_logger(__name__)

Monomial = Tuple[int, ...]
Operand = Union["MultiPoly", int]

DEFAULT_REWRITE_PASSES = 10000


class VarSet:
    """Ordered, duplicate-free variable names bound to one sympy ring."""

    def __init__(self, names: Sequence[str]) -> None:
        names = tuple(names)
        if not names:
            raise PolynomialError("A VarSet needs at least one variable")
        if len(set(names)) != len(names):
            raise PolynomialError(f"Duplicate variable names in {list(names)}")
        self.names: Tuple[str, ...] = names
        self.ring, *_ = poly_ring(",".join(names), ZZ, grlex)
        self._index = {name: i for i, name in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarSet({', '.join(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolynomialError(f"Variable {name!r} is not in {self!r}") from None

    def gen(self, name: str) -> "MultiPoly":
        return MultiPoly(self, self.ring.gens[self.index(name)])

    def gens(self) -> Tuple["MultiPoly", ...]:
        return tuple(MultiPoly(self, g) for g in self.ring.gens)

    def const(self, value: int) -> "MultiPoly":
        return MultiPoly(self, self.ring(value))

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, self.ring.zero)

    def monomial(self, exponents: Mapping[str, int]) -> "MultiPoly":
        """Build the monomial with the given exponents and coefficient 1."""
        exps = [0] * len(self.names)
        for name, e in exponents.items():
            exps[self.index(name)] = e
        return MultiPoly(self, self.ring({tuple(exps): 1}))

    def parse(self, text: str) -> "MultiPoly":
        """Parse printed notation, e.g. "Ct^3 + A(C + 1)t^2 + A^2t - C"."""
        return MultiPoly(self, parse_notation(text, self.ring))

    def from_terms(self, terms: Iterable[Tuple[Sequence[int], int]]) -> "MultiPoly":
        data: Dict[Monomial, int] = {}
        for exps, coeff in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.names) or any(e < 0 for e in exps):
                raise PolynomialError(f"Exponent vector {list(exps)} does not fit {self!r}")
            data[exps] = data.get(exps, 0) + int(coeff)
        return MultiPoly(self, self.ring({m: c for m, c in data.items() if c}))

    def from_json(self, terms: List[Dict[str, Any]]) -> "MultiPoly":
        return self.from_terms((term["e"], int(term["c"])) for term in terms)


class MultiPoly:
    """Immutable polynomial with integer coefficients over a VarSet."""

    __slots__ = ("varset", "element")

    def __init__(self, varset: VarSet, element: Any) -> None:
        self.varset = varset
        self.element = element

    # Arithmetic

    def _coerce(self, other: Operand) -> Any:
        if isinstance(other, MultiPoly):
            if other.varset != self.varset:
                raise VarSetMismatchError(
                    f"Cannot combine polynomials over {self.varset!r} and {other.varset!r}"
                )
            return other.element
        if isinstance(other, int):
            return self.varset.ring(other)
        return NotImplemented

    def _wrap(self, element: Any) -> "MultiPoly":
        return MultiPoly(self.varset, element)

    def __add__(self, other: Operand) -> "MultiPoly":
        rhs = self._coerce(other)
        return NotImplemented if rhs is NotImplemented else self._wrap(self.element + rhs)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "MultiPoly":
        rhs = self._coerce(other)
        return NotImplemented if rhs is NotImplemented else self._wrap(self.element - rhs)

    def __rsub__(self, other: Operand) -> "MultiPoly":
        lhs = self._coerce(other)
        return NotImplemented if lhs is NotImplemented else self._wrap(lhs - self.element)

    def __mul__(self, other: Operand) -> "MultiPoly":
        rhs = self._coerce(other)
        return NotImplemented if rhs is NotImplemented else self._wrap(self.element * rhs)

    __rmul__ = __mul__

    def __neg__(self) -> "MultiPoly":
        return self._wrap(-self.element)

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            raise PolynomialError("Negative powers are not polynomials")
        return self._wrap(self.element ** e)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self.varset == other.varset and self.element == other.element
        if isinstance(other, int):
            return self.element == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.varset, tuple(self.terms())))

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_text()})"

    # Inspection

    @property
    def is_zero(self) -> bool:
        return not self.element

    @property
    def is_constant(self) -> bool:
        return self.element.is_ground

    def terms(self) -> List[Tuple[Monomial, int]]:
        """(exponents, coefficient) pairs, graded-lex descending."""
        return [(tuple(m), int(c)) for m, c in self.element.terms(grlex)]

    def __len__(self) -> int:
        return len(self.element)

    def degree(self, var: str) -> int:
        """Degree in var; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        return int(self.element.degree(self.varset.index(var)))

    def total_degree(self) -> int:
        return -1 if self.is_zero else max(sum(m) for m in self.element.keys())

    def variables(self) -> Tuple[str, ...]:
        """Names of variables that actually occur."""
        used = [False] * len(self.varset)
        for m in self.element.keys():
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(name for name, flag in zip(self.varset.names, used) if flag)

    def coefficients(self, var: str) -> List["MultiPoly"]:
        """Coefficients of var^0, var^1, ... up to the degree in var."""
        i = self.varset.index(var)
        buckets: Dict[int, Dict[Monomial, Any]] = {}
        for m, c in self.element.items():
            reduced = m[:i] + (0,) + m[i + 1:]
            buckets.setdefault(m[i], {})[reduced] = c
        ring = self.varset.ring
        top = max(buckets) if buckets else -1
        return [self._wrap(ring(buckets.get(d, {}))) for d in range(top + 1)]

    def coeff(self, var: str, d: int) -> "MultiPoly":
        coeffs = self.coefficients(var)
        return coeffs[d] if 0 <= d < len(coeffs) else self.varset.zero()

    def leading_coeff(self, var: str) -> "MultiPoly":
        coeffs = self.coefficients(var)
        return coeffs[-1] if coeffs else self.varset.zero()

    def leading_term_coeff(self) -> int:
        """Integer coefficient of the graded-lex leading term."""
        return int(self.element.LC) if not self.is_zero else 0

    # Transformations

    def permute(self, mapping: Mapping[str, str]) -> "MultiPoly":
        """Rename variables by a permutation of names, e.g. x→y→z→x."""
        src = [self.varset.index(name) for name in mapping]
        dst = [self.varset.index(name) for name in mapping.values()]
        if sorted(src) != sorted(dst):
            raise PolynomialError("Variable mapping must be a permutation of its keys")
        data = {}
        for m, c in self.element.items():
            new = list(m)
            for s in src:
                new[s] = 0
            for s, d in zip(src, dst):
                new[d] = m[s]
            data[tuple(new)] = c
        return self._wrap(self.varset.ring(data))

    def compose(self, var: str, value: "MultiPoly") -> "MultiPoly":
        """Substitute a polynomial for one variable."""
        result = self.varset.zero()
        for c in reversed(self.coefficients(var)):
            result = result * value + c
        return result

    def change_varset(self, varset: VarSet) -> "MultiPoly":
        """Re-express over another VarSet containing every variable that occurs."""
        positions = {i: varset.index(self.varset.names[i])
                     for i, name in enumerate(self.varset.names) if name in self.variables()}
        data = {}
        for m, c in self.element.items():
            new = [0] * len(varset)
            for i, dst in positions.items():
                new[dst] = m[i]
            data[tuple(new)] = c
        return MultiPoly(varset, varset.ring(data))

    # Serialization

    def to_json(self) -> List[Dict[str, Any]]:
        return [{"e": list(m), "c": str(c)} for m, c in self.terms()]

    def to_text(self) -> str:
        """Printed-style text; monomials are juxtaposed unless a name is multi-character."""
        if self.is_zero:
            return "0"
        sep = "*" if any(len(name) > 1 for name in self.varset.names) else ""
        parts: List[str] = []
        for m, c in self.terms():
            factors = []
            for name, e in zip(self.varset.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}" if e < 10 else f"{name}^{{{e}}}")
            mono = sep.join(factors)
            magnitude = abs(c)
            if not mono:
                body = str(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{magnitude}{sep}{mono}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(parts)


def poly_arith(f: MultiPoly, g: MultiPoly, op: str) -> MultiPoly:
    """Exact add, sub or mul of two polynomials over the same VarSet."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise PolynomialError(f"Unknown polynomial operation {op!r}")


def exact_div(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """
    Divide f by g, requiring a zero remainder.

    Raises:
        PolynomialError: If g is zero
        InexactDivisionError: If g does not divide f; carries the remainder
    """
    if g.varset != f.varset:
        raise VarSetMismatchError(f"Cannot divide over {f.varset!r} by {g.varset!r}")
    if g.is_zero:
        raise PolynomialError("Division by the zero polynomial")
    quotient, remainder = f.element.div(g.element)
    if remainder:
        raise InexactDivisionError(f, g, MultiPoly(f.varset, remainder))
    return MultiPoly(f.varset, quotient)


def divide_out(f: MultiPoly, g: MultiPoly) -> Tuple[MultiPoly, int]:
    """Divide g out of f as often as it divides; returns (cofactor, multiplicity)."""
    mult = 0
    while not f.is_zero:
        quotient, remainder = f.element.div(g.element)
        if remainder:
            break
        f = MultiPoly(f.varset, quotient)
        mult += 1
    return f, mult


def content_and_primitive(f: MultiPoly) -> Tuple[int, MultiPoly]:
    """
    Split f into its positive integer content and primitive part.

    Raises:
        PolynomialError: If f is zero
    """
    if f.is_zero:
        raise PolynomialError("The zero polynomial has no content")
    content = reduce(gcd, (abs(int(c)) for c in f.element.values()))
    return content, MultiPoly(f.varset, f.element.quo_ground(content))


def sign_normalize(f: MultiPoly) -> Tuple[int, MultiPoly]:
    """Make the graded-lex leading coefficient positive; returns (sign, normalized)."""
    if f.is_zero or f.leading_term_coeff() > 0:
        return 1, f
    return -1, -f


def parameter_content(f: MultiPoly, var: str) -> MultiPoly:
    """Polynomial gcd of the coefficients of f viewed as a polynomial in var."""
    coeffs = [c.element for c in f.coefficients(var) if not c.is_zero]
    if not coeffs:
        return f.varset.const(1)
    content = reduce(lambda a, b: a.gcd(b), coeffs)
    return MultiPoly(f.varset, content)


def _monomial_of(m: MultiPoly) -> Monomial:
    terms = m.terms()
    if len(terms) != 1 or terms[0][1] != 1:
        raise PolynomialError(f"Rewrite target must be a monomial with coefficient 1, got {m.to_text()}")
    return terms[0][0]


def substitute_rewrite(
    pol: MultiPoly,
    m: MultiPoly,
    rep: MultiPoly,
    max_passes: int = DEFAULT_REWRITE_PASSES,
) -> MultiPoly:
    """
    Replace every term divisible by the monomial m with (term / m) * rep.

    Each pass rewrites all divisible terms of the current polynomial at once;
    passes repeat until a pass finds nothing to rewrite.

    Raises:
        RewriteLimitError: If more than max_passes passes are needed
    """
    target = _monomial_of(m)
    ring = pol.varset.ring
    rep_el = pol._coerce(rep)
    current = pol.element
    passes = 0
    while True:
        quotient: Dict[Monomial, Any] = {}
        rest: Dict[Monomial, Any] = {}
        for exps, c in current.items():
            if all(e >= t for e, t in zip(exps, target)):
                quotient[tuple(e - t for e, t in zip(exps, target))] = c
            else:
                rest[exps] = c
        if not quotient:
            return MultiPoly(pol.varset, current)
        passes += 1
        if passes > max_passes:
            raise RewriteLimitError(m, max_passes)
        current = ring(rest) + ring(quotient) * rep_el


def rewrite_all(
    pol: MultiPoly,
    rules: Sequence[Tuple[MultiPoly, MultiPoly]],
    max_passes: int = DEFAULT_REWRITE_PASSES,
) -> MultiPoly:
    """Apply several (monomial, replacement) rules in turn until none changes pol."""
    rounds = 0
    while True:
        before = pol
        for m, rep in rules:
            pol = substitute_rewrite(pol, m, rep, max_passes)
        if pol == before:
            return pol
        rounds += 1
        if rounds > max_passes:
            raise RewriteLimitError(rules[0][0], max_passes)


def eval_mod_p(f: MultiPoly, assignment: Mapping[str, Any], tower: Any) -> Any:
    """
    Evaluate f with coefficients reduced mod p.

    Values may be integers, BaseElem tuples or TowerElem. The result is a
    TowerElem if any assigned value used by f is a TowerElem, else a BaseElem.

    Raises:
        UnassignedVariableError: If a variable of f has no value
    """
    from src.services.tower import TowerElem

    used = f.variables()
    missing = [name for name in used if name not in assignment]
    if missing:
        raise UnassignedVariableError(f"No value assigned to {', '.join(missing)}")
    in_tower = any(isinstance(assignment[name], TowerElem) for name in used)
    positions = [f.varset.index(name) for name in used]
    p = tower.p

    if not in_tower and tower.k == 1:
        ints = {i: _base_int(assignment[f.varset.names[i]], p) for i in positions}
        total = 0
        for m, c in f.element.items():
            term = int(c) % p
            for i in positions:
                if m[i]:
                    term = term * pow(ints[i], m[i], p) % p
            total = (total + term) % p
        return (total,)

    if in_tower:
        values = {
            i: _as_tower(assignment[f.varset.names[i]], tower) for i in positions
        }
        total = tower.zero
        for m, c in f.element.items():
            term = tower.embed(int(c))
            for i in positions:
                if m[i]:
                    term = term * values[i] ** m[i]
            total = total + term
        return total

    base_values = {i: tower.base(assignment[f.varset.names[i]]) for i in positions}
    acc = tower.base_zero
    for m, c in f.element.items():
        term = tower.base(int(c))
        for i in positions:
            if m[i]:
                term = tower.base_mul(term, tower.base_pow(base_values[i], m[i]))
        acc = tower.base_add(acc, term)
    return acc


def _base_int(value: Any, p: int) -> int:
    if isinstance(value, int):
        return value % p
    return int(value[0]) % p


def _as_tower(value: Any, tower: Any) -> Any:
    from src.services.tower import TowerElem

    return value if isinstance(value, TowerElem) else tower.embed(value)


def common_varset(*polys: Optional[MultiPoly]) -> VarSet:
    varsets = {p.varset for p in polys if p is not None}
    if len(varsets) != 1:
        raise VarSetMismatchError("Polynomials do not share one VarSet")
    return varsets.pop()
