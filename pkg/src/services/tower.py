"""
Finite field tower F_p ⊂ F_q = F_p[t]/(g) ⊂ F_{q^3} = F_q[s]/(h).

Elements of F_{q^3} are stored as 3k integers: coords[i*k + j] is the coefficient
of s^i t^j. The same layout defines the mixed-radix index used for enumeration
and hit-sets: index = sum(coords[n] * p^n).

Scalar arithmetic here is the reference implementation; src.services.kernels
provides the vectorised counterpart used by exhaustive sweeps.
"""

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from src.lib.exceptions import BudgetExceededError, FieldArithmeticError, FieldSpecError
from src.lib.logging_config import get_logger
from src.models.entities import FieldSpec

logger = get_logger(__name__)

BaseElem = Tuple[int, ...]

DEFAULT_ENUMERATION_BUDGET = 2 ** 24

_SPEC_RE = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*(?::([^:]*):([^:]*))?\s*$")


def parse_field_spec(text: str) -> FieldSpec:
    """
    Parse "p^k" or "p^k:g0,...,gk:h0,h1,h2,h3".

    Entries of h are integers (prime-field elements) or "a|b|..." t-coefficient
    lists for general F_q elements. Either list may be left empty.

    Raises:
        FieldSpecError: If the text does not match the format
    """
    match = _SPEC_RE.match(text or "")
    if not match:
        raise FieldSpecError(f"Malformed field spec: {text!r}")
    p, k = int(match.group(1)), int(match.group(2))
    g_text, h_text = match.group(3), match.group(4)
    try:
        g = tuple(int(c) % p for c in g_text.split(",")) if g_text else None
        h = None
        if h_text:
            entries = []
            for token in h_text.split(","):
                parts = [int(v) % p for v in token.split("|")]
                entries.append(tuple(parts + [0] * (k - len(parts))))
            h = tuple(entries)
    except ValueError as e:
        raise FieldSpecError(f"Malformed coefficient list in field spec {text!r}: {e}") from e
    return FieldSpec(p=p, k=k, g=g, h=h)


@dataclass(frozen=True)
class TowerElem:
    """Element of F_{q^3}; arithmetic operators delegate to the owning tower."""
    coords: Tuple[int, ...]
    tower: "Tower" = field(compare=False, repr=False)

    def __add__(self, other: "TowerElem") -> "TowerElem":
        return self.tower.add(self, other)

    def __sub__(self, other: "TowerElem") -> "TowerElem":
        return self.tower.sub(self, other)

    def __mul__(self, other: "TowerElem") -> "TowerElem":
        return self.tower.mul(self, other)

    def __truediv__(self, other: "TowerElem") -> "TowerElem":
        return self.tower.div(self, other)

    def __neg__(self) -> "TowerElem":
        return self.tower.neg(self)

    def __pow__(self, e: int) -> "TowerElem":
        return self.tower.pow(self, e)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def components(self) -> Tuple[BaseElem, BaseElem, BaseElem]:
        k = self.tower.k
        return (self.coords[:k], self.coords[k:2 * k], self.coords[2 * k:])

    def to_json(self) -> List[Any]:
        """Length-3 list of base elements (plain ints when k = 1)."""
        return [self.tower.base_to_json(c) for c in self.components()]


class Tower:
    """
    Immutable description of F_{q^3} with precomputed Frobenius action.

    Use make_tower() to construct; it validates the moduli.
    """

    def __init__(
        self,
        p: int,
        k: int,
        g: Tuple[int, ...],
        h: Tuple[BaseElem, ...],
        enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
    ) -> None:
        self.p = p
        self.k = k
        self.q = p ** k
        self.size = self.q ** 3
        self.order3 = self.size - 1
        self.g = g
        self.h = h
        self.spec = FieldSpec(p=p, k=k, g=g, h=h)
        self.enumeration_budget = enumeration_budget
        self.base_zero: BaseElem = (0,) * k
        self.base_one: BaseElem = (1,) + (0,) * (k - 1)
        self.zero = TowerElem((0,) * (3 * k), self)
        self.one = TowerElem(self.base_one + (0,) * (2 * k), self)
        self.frobenius_matrix = self._build_frobenius_matrix()

    # Base field F_q

    def base(self, value: Union[int, Sequence[int]]) -> BaseElem:
        """Coerce an integer or t-coefficient list into a reduced BaseElem."""
        if isinstance(value, (int, np.integer)):
            return (int(value) % self.p,) + (0,) * (self.k - 1)
        coeffs = [int(v) % self.p for v in value]
        if len(coeffs) > self.k:
            raise FieldSpecError(f"Base element {list(value)} has more than k={self.k} coordinates")
        return tuple(coeffs + [0] * (self.k - len(coeffs)))

    def base_to_json(self, c: BaseElem) -> Any:
        return c[0] if self.k == 1 else list(c)

    def base_add(self, a: BaseElem, b: BaseElem) -> BaseElem:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def base_sub(self, a: BaseElem, b: BaseElem) -> BaseElem:
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def base_neg(self, a: BaseElem) -> BaseElem:
        return tuple((-x) % self.p for x in a)

    def base_mul(self, a: BaseElem, b: BaseElem) -> BaseElem:
        p, k = self.p, self.k
        if k == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        # t^k = -(g_0 + ... + g_{k-1} t^{k-1})
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                for m in range(k):
                    prod[d - k + m] -= c * self.g[m]
        return tuple(v % p for v in prod[:k])

    def base_pow(self, a: BaseElem, e: int) -> BaseElem:
        result, square = self.base_one, a
        while e > 0:
            if e & 1:
                result = self.base_mul(result, square)
            square = self.base_mul(square, square)
            e >>= 1
        return result

    def base_inv(self, a: BaseElem) -> BaseElem:
        if not any(a):
            raise FieldArithmeticError("Division by zero in F_q")
        return self.base_pow(a, self.q - 2)

    def base_elements(self) -> List[BaseElem]:
        """All q base elements in mixed-radix order (first coordinate least significant)."""
        return [
            tuple(reversed(digits)) for digits in itertools.product(range(self.p), repeat=self.k)
        ]

    def base_index(self, c: BaseElem) -> int:
        return sum(v * self.p ** n for n, v in enumerate(c))

    # F_{q^3}

    def element(self, coords: Sequence[int]) -> TowerElem:
        if len(coords) != 3 * self.k:
            raise FieldSpecError(f"Tower element needs {3 * self.k} coordinates, got {len(coords)}")
        return TowerElem(tuple(int(v) % self.p for v in coords), self)

    def embed(self, c: Union[int, Sequence[int]]) -> TowerElem:
        """Embed a base element (or integer) as a constant of F_{q^3}."""
        return TowerElem(self.base(c) + (0,) * (2 * self.k), self)

    def from_components(self, parts: Sequence[Any]) -> TowerElem:
        """Build from three base-element values (ints or t-coefficient lists)."""
        if len(parts) != 3:
            raise FieldSpecError("Tower element needs exactly three base components")
        return TowerElem(sum((self.base(c) for c in parts), ()), self)

    def generator(self) -> TowerElem:
        """The class of s, the root of h."""
        return TowerElem(self.base_zero + self.base_one + self.base_zero, self)

    def index_of(self, x: TowerElem) -> int:
        return sum(v * self.p ** n for n, v in enumerate(x.coords))

    def from_index(self, index: int) -> TowerElem:
        coords = []
        for _ in range(3 * self.k):
            index, digit = divmod(index, self.p)
            coords.append(digit)
        return TowerElem(tuple(coords), self)

    def add(self, a: TowerElem, b: TowerElem) -> TowerElem:
        return TowerElem(tuple((x + y) % self.p for x, y in zip(a.coords, b.coords)), self)

    def sub(self, a: TowerElem, b: TowerElem) -> TowerElem:
        return TowerElem(tuple((x - y) % self.p for x, y in zip(a.coords, b.coords)), self)

    def neg(self, a: TowerElem) -> TowerElem:
        return TowerElem(tuple((-x) % self.p for x in a.coords), self)

    def mul(self, a: TowerElem, b: TowerElem) -> TowerElem:
        ac, bc = a.components(), b.components()
        prod = [self.base_zero] * 5
        for i in range(3):
            if any(ac[i]):
                for j in range(3):
                    if any(bc[j]):
                        prod[i + j] = self.base_add(prod[i + j], self.base_mul(ac[i], bc[j]))
        # s^3 = -(h_0 + h_1 s + h_2 s^2)
        for d in (4, 3):
            c = prod[d]
            if any(c):
                for m in range(3):
                    prod[d - 3 + m] = self.base_sub(prod[d - 3 + m], self.base_mul(c, self.h[m]))
        return TowerElem(prod[0] + prod[1] + prod[2], self)

    def pow(self, x: TowerElem, e: int) -> TowerElem:
        """Square-and-multiply; 0^0 = 1 and exponents of nonzero x reduce mod q^3 - 1."""
        if e < 0:
            return self.pow(self.inv(x), -e)
        if e == 0:
            return self.one
        if x.is_zero:
            return self.zero
        e %= self.order3
        result, square = self.one, x
        while e > 0:
            if e & 1:
                result = self.mul(result, square)
            square = self.mul(square, square)
            e >>= 1
        return result

    def inv(self, x: TowerElem) -> TowerElem:
        if x.is_zero:
            raise FieldArithmeticError()
        return self.pow(x, self.order3 - 1)

    def div(self, a: TowerElem, b: TowerElem) -> TowerElem:
        return self.mul(a, self.inv(b))

    def arith(self, a: TowerElem, b: Optional[TowerElem], op: str) -> TowerElem:
        """Dispatch one of add, sub, mul, div, neg, inv."""
        if op == "neg":
            return self.neg(a)
        if op == "inv":
            return self.inv(a)
        if b is None:
            raise ValueError(f"Operation {op} needs two operands")
        operations = {"add": self.add, "sub": self.sub, "mul": self.mul, "div": self.div}
        if op not in operations:
            raise ValueError(f"Unknown field operation: {op}")
        return operations[op](a, b)

    def _build_frobenius_matrix(self) -> np.ndarray:
        n = 3 * self.k
        matrix = np.zeros((n, n), dtype=np.int64)
        for col in range(n):
            unit = [0] * n
            unit[col] = 1
            image = self.pow(TowerElem(tuple(unit), self), self.q)
            matrix[:, col] = image.coords
        return matrix

    def frobenius(self, x: TowerElem) -> TowerElem:
        """x^q via the precomputed F_p-linear map."""
        image = self.frobenius_matrix.dot(np.asarray(x.coords, dtype=np.int64)) % self.p
        return TowerElem(tuple(int(v) for v in image), self)

    def norm(self, x: TowerElem) -> BaseElem:
        """x^{q^2+q+1} = x * x^q * x^{q^2}, an element of F_q."""
        y = self.frobenius(x)
        value = self.mul(self.mul(x, y), self.frobenius(y))
        return value.coords[: self.k]

    def in_mu(self, x: TowerElem, d: int) -> bool:
        if x.is_zero:
            return False
        return self.pow(x, d) == self.one

    def is_base(self, x: TowerElem) -> bool:
        return not any(x.coords[self.k:])

    # Group structure

    @cached_property
    def order_factors(self) -> Tuple[int, ...]:
        return tuple(sorted(sympy.factorint(self.order3)))

    def order(self, x: TowerElem) -> int:
        """Multiplicative order of a nonzero element."""
        if x.is_zero:
            raise FieldArithmeticError("Zero has no multiplicative order")
        n = self.order3
        for r in self.order_factors:
            while n % r == 0 and self.pow(x, n // r) == self.one:
                n //= r
        return n

    @cached_property
    def primitive(self) -> TowerElem:
        """Smallest-index element of order q^3 - 1."""
        for index in range(1, self.size):
            x = self.from_index(index)
            if all(self.pow(x, self.order3 // r) != self.one for r in self.order_factors):
                logger.debug(f"Primitive element of {self.describe()} found at index {index}")
                return x
        raise FieldArithmeticError("No primitive element found")  # pragma: no cover

    def mu_elements(self, d: Optional[int] = None) -> List[TowerElem]:
        """μ_d as the ladder w^j, w = θ^{(q^3-1)/d}; default d = q^2 + q + 1."""
        d = d or self.q * self.q + self.q + 1
        if self.order3 % d:
            raise ValueError(f"{d} does not divide q^3 - 1 = {self.order3}")
        if d == self.q * self.q + self.q + 1:
            return list(self._mu_default)
        return self._ladder(d)

    @cached_property
    def _mu_default(self) -> Tuple[TowerElem, ...]:
        return tuple(self._ladder(self.q * self.q + self.q + 1))

    def _ladder(self, d: int) -> List[TowerElem]:
        w = self.pow(self.primitive, self.order3 // d)
        out, current = [], self.one
        for _ in range(d):
            out.append(current)
            current = self.mul(current, w)
        return out

    # Enumeration

    def check_budget(self, budget: Optional[int] = None) -> None:
        limit = budget if budget is not None else self.enumeration_budget
        if self.size > limit:
            raise BudgetExceededError("enumeration", self.size, limit)

    def enumerate(self, budget: Optional[int] = None) -> Iterator[TowerElem]:
        """All q^3 elements in index order, starting at zero."""
        self.check_budget(budget)
        for index in range(self.size):
            yield self.from_index(index)

    def describe(self) -> str:
        return f"F_{{{self.p}^{3 * self.k}}}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "k": self.k,
            "q": self.q,
            "g": list(self.g),
            "h": [self.base_to_json(c) for c in self.h],
            "spec": self.spec.to_string(),
        }


def _g_is_irreducible(g: Sequence[int], p: int) -> bool:
    if len(g) == 2:
        return True
    t = sympy.Symbol("t")
    return bool(sympy.Poly.from_list(list(reversed(g)), t, modulus=p).is_irreducible)


def _cubic_has_root(tower: Tower, h: Sequence[BaseElem]) -> bool:
    for c in tower.base_elements():
        value = h[3]
        for coeff in (h[2], h[1], h[0]):
            value = tower.base_add(tower.base_mul(value, c), coeff)
        if not any(value):
            return True
    return False


def make_tower(spec: FieldSpec, enumeration_budget: Optional[int] = None) -> Tower:
    """
    Build and validate a tower, auto-selecting g and h when omitted.

    Auto-selected moduli are the lexicographically smallest monic irreducibles,
    comparing coefficients from the constant term upward.

    Raises:
        FieldSpecError: If p is not an odd prime or g/h are reducible
    """
    try:
        spec.validate()
    except ValueError as e:
        raise FieldSpecError(str(e)) from e
    if not sympy.isprime(spec.p):
        raise FieldSpecError(f"Non-prime modulus p = {spec.p}")
    p, k = spec.p, spec.k
    budget = enumeration_budget if enumeration_budget is not None else DEFAULT_ENUMERATION_BUDGET

    if spec.g is not None:
        g = tuple(c % p for c in spec.g)
        if not _g_is_irreducible(g, p):
            raise FieldSpecError(f"g = {list(g)} is reducible over F_{p}")
    else:
        g = next(
            cand + (1,)
            for cand in itertools.product(range(p), repeat=k)
            if _g_is_irreducible(cand + (1,), p)
        )

    # Bootstrap a tower with a placeholder h to get base-field helpers
    scaffold = Tower.__new__(Tower)
    scaffold.p, scaffold.k, scaffold.q, scaffold.g = p, k, p ** k, g
    scaffold.base_one = (1,) + (0,) * (k - 1)
    scaffold.base_zero = (0,) * k

    if spec.h is not None:
        h = tuple(tuple(v % p for v in c) for c in spec.h)
        if _cubic_has_root(scaffold, h):
            raise FieldSpecError(f"h = {[list(c) for c in h]} is reducible over F_{p}^{k}")
    else:
        elements = scaffold.base_elements()
        h = None
        for i0, i1, i2 in itertools.product(range(len(elements)), repeat=3):
            cand = (elements[i0], elements[i1], elements[i2], scaffold.base_one)
            if any(cand[0]) and not _cubic_has_root(scaffold, cand):
                h = cand
                break
        if h is None:  # pragma: no cover
            raise FieldSpecError("No irreducible cubic found")

    tower = Tower(p, k, g, h, enumeration_budget=budget)
    logger.debug(f"Tower {tower.describe()} built: g={list(g)}, h={[list(c) for c in h]}")
    return tower
