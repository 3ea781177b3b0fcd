"""
Data model entities for permupoly.

This module defines the core data structures shared by the services and the CLI:
field specifications, coefficient sets, verification verdicts, symbolic reports
and the configuration tree. Entities are plain dataclasses; values that belong to
a particular tower (TowerElem, MultiPoly) are carried as opaque objects and
serialized by the owning service.
"""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

if TYPE_CHECKING:
    from src.services.symbolic.multipoly import MultiPoly

SCHEMA_VERSION = "1"

FAMILY_IDS: Tuple[str, ...] = ("T31", "T33", "T34", "T35", "T36", "T37", "T38", "T39", "T310")


@dataclass(frozen=True)
class FieldSpec:
    """
    Parameters of the tower F_p ⊂ F_q ⊂ F_{q^3}.

    g is the monic degree-k modulus of F_q over F_p (k+1 integers, low-to-high).
    h is the monic cubic modulus of F_{q^3} over F_q (four base elements, each a
    k-tuple of integers, low-to-high). Either may be None for auto-selection.
    """
    p: int
    k: int = 1
    g: Optional[Tuple[int, ...]] = None
    h: Optional[Tuple[Tuple[int, ...], ...]] = None

    @property
    def q(self) -> int:
        return self.p ** self.k

    def validate(self) -> None:
        """
        Validate shape constraints that do not need field arithmetic.

        Raises:
            ValueError: If p, k, g or h are malformed
        """
        if self.p < 3 or self.p % 2 == 0:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.k < 1:
            raise ValueError(f"k must be ≥ 1, got {self.k}")
        if self.g is not None:
            if len(self.g) != self.k + 1:
                raise ValueError(f"g must have {self.k + 1} coefficients")
            if self.g[-1] % self.p != 1:
                raise ValueError("g must be monic")
        if self.h is not None:
            if len(self.h) != 4 or any(len(c) != self.k for c in self.h):
                raise ValueError(f"h must have 4 coefficients of length {self.k}")
            if tuple(c % self.p for c in self.h[3]) != (1,) + (0,) * (self.k - 1):
                raise ValueError("h must be monic")

    def to_string(self) -> str:
        """Render as 'p^k' or 'p^k:g0,..,gk:h0,..,h3' (non-prime-field h entries as a|b|..)."""
        text = f"{self.p}^{self.k}"
        if self.g is None and self.h is None:
            return text
        g_text = ",".join(str(c) for c in self.g) if self.g is not None else ""
        h_text = ""
        if self.h is not None:
            h_text = ",".join(
                str(c[0]) if all(v == 0 for v in c[1:]) else "|".join(str(v) for v in c) for c in self.h
            )
        return f"{text}:{g_text}:{h_text}"


@dataclass(frozen=True)
class CoeffSet:
    """
    Coefficients of one family instance.

    values maps slot names (A, B, C, D) to field elements: a TowerElem for the
    T31 slot A, BaseElem tuples otherwise.
    """
    family: str
    values: Dict[str, Any]

    def validate(self, slots: Tuple[str, ...]) -> None:
        """
        Check that exactly the family's slots are populated.

        Raises:
            ValueError: If a slot is missing or unexpected
        """
        missing = [s for s in slots if s not in self.values]
        extra = [s for s in self.values if s not in slots]
        if missing:
            raise ValueError(f"{self.family} requires coefficient(s) {', '.join(missing)}")
        if extra:
            raise ValueError(f"{self.family} does not take coefficient(s) {', '.join(extra)}")


@dataclass(frozen=True)
class ExponentTerm:
    """One (exponent, slot) pair of a family; slot 'lead' has coefficient 1."""
    exponent: int
    slot: str


@dataclass
class ConditionRow:
    """Verdict for one printed hypothesis."""
    name: str
    label: str
    passed: bool
    witness: Optional[Any] = None
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"name": self.name, "label": self.label, "passed": self.passed}
        if self.witness is not None:
            row["witness"] = self.witness
        if self.note:
            row["note"] = self.note
        return row


@dataclass
class ConditionReport:
    """All hypothesis rows of one theorem for one coefficient tuple, in printed order."""
    family: str
    tower: str
    rows: List[ConditionRow] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(row.passed for row in self.rows)

    def failed(self) -> List[str]:
        return [row.name for row in self.rows if not row.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "tower": self.tower,
            "rows": [row.to_dict() for row in self.rows],
            "verdict": self.verdict,
        }


@dataclass
class PermVerdict:
    """
    Outcome of an exhaustive bijectivity check.

    counterexample holds the coordinate lists of two distinct inputs with equal image.
    """
    is_permutation: bool
    elements_checked: int
    counterexample: Optional[Tuple[List[int], List[int]]] = None

    def __post_init__(self) -> None:
        if not self.is_permutation and self.counterexample is None:
            raise ValueError("A failed permutation verdict must carry a counterexample")

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "is_permutation": self.is_permutation,
            "elements_checked": self.elements_checked,
        }
        if self.counterexample is not None:
            data["counterexample"] = [list(self.counterexample[0]), list(self.counterexample[1])]
        return data


@dataclass
class CompletenessVerdict:
    """Verdicts for f and f + εx from one enumeration pass."""
    f: PermVerdict
    f_plus_eps: PermVerdict
    epsilon: List[int]

    @property
    def is_complete(self) -> bool:
        return self.f.is_permutation and self.f_plus_eps.is_permutation

    def to_dict(self) -> Dict[str, Any]:
        return {
            "f": self.f.to_dict(),
            "f_plus_eps": self.f_plus_eps.to_dict(),
            "epsilon": self.epsilon,
            "is_complete": self.is_complete,
        }


@dataclass
class SearchResult:
    """One emitted tuple of a coefficient-space search."""
    coeffs: Dict[str, Any]
    conditions: Optional[ConditionReport] = None
    verdict: Optional[PermVerdict] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"coeffs": self.coeffs}
        if self.conditions is not None:
            data["conditions"] = self.conditions.to_dict()
        if self.verdict is not None:
            data["permutation"] = self.verdict.to_dict()
        return data


@dataclass
class SweepReport:
    """Soundness sweep summary: every tuple passing the hypotheses must permute."""
    family: str
    tower: str
    tuples_total: int = 0
    tuples_passing_conditions: int = 0
    tuples_condition_pass_and_permutation: int = 0
    passing: List[Dict[str, Any]] = field(default_factory=list)
    violations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def sound(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "tower": self.tower,
            "tuples_total": self.tuples_total,
            "tuples_passing_conditions": self.tuples_passing_conditions,
            "tuples_condition_pass_and_permutation": self.tuples_condition_pass_and_permutation,
            "passing": self.passing,
            "violations": self.violations,
        }


@dataclass
class CppCountReport:
    """Counts around the complete-binomial family x^{q^2+q-1} + Ax."""
    tower: str
    formula: int
    hypothesis_count: int
    complete_count: int
    parameterized_count: int
    parameterized_complete: int
    hypothesis_not_parameterized: int
    permutation_count: int = 0

    @property
    def matches_formula(self) -> bool:
        return self.complete_count == self.formula

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tower": self.tower,
            "formula": self.formula,
            "hypothesis_count": self.hypothesis_count,
            "complete_count": self.complete_count,
            "parameterized_count": self.parameterized_count,
            "parameterized_complete": self.parameterized_complete,
            "hypothesis_not_parameterized": self.hypothesis_not_parameterized,
            "permutation_count": self.permutation_count,
            "matches_formula": self.matches_formula,
        }


@dataclass
class ResultantReport:
    """
    Outcome of one elimination pipeline.

    The raw resultant equals the product of the divided factors times the
    divided eliminant; after the coefficient relation is applied, the rewritten
    eliminant equals the product of rewritten_factors times sign * residual.
    """
    theorem: str
    raw: "MultiPoly"
    factors: List[Tuple["MultiPoly", int]]
    residual: "MultiPoly"
    sign: int
    residual_is_linear_in_x: bool
    rewritten_factors: List[Tuple["MultiPoly", int]] = field(default_factory=list)
    reconstructs: bool = False
    alpha: Optional["MultiPoly"] = None
    beta: Optional["MultiPoly"] = None
    relation: str = ""
    source: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "varset": list(self.raw.varset.names),
            "raw": self.raw.to_json(),
            "factors": [{"factor": f.to_json(), "multiplicity": m} for f, m in self.factors],
            "residual": self.residual.to_json(),
            "sign": self.sign,
            "rewritten_factors": [
                {"factor": f.to_json(), "multiplicity": m} for f, m in self.rewritten_factors
            ],
            "residual_is_linear_in_x": self.residual_is_linear_in_x,
            "reconstructs": self.reconstructs,
            "alpha": self.alpha.to_json() if self.alpha is not None else None,
            "beta": self.beta.to_json() if self.beta is not None else None,
            "relation": self.relation,
            "source": self.source,
        }


@dataclass
class DerivedPolynomial:
    """
    Auxiliary polynomial produced by derivation.

    match is one of 'exact', 'proportional', 'mismatch', 'unprinted'.
    """
    name: str
    theorem: str
    poly: "MultiPoly"
    sign: int = 1
    match: str = "unprinted"
    stages: Dict[str, "MultiPoly"] = field(default_factory=dict)
    note: str = ""

    @property
    def matches_printed(self) -> bool:
        return self.match in ("exact", "proportional")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "theorem": self.theorem,
            "varset": list(self.poly.varset.names),
            "poly": self.poly.to_json(),
            "text": self.poly.to_text(),
            "sign": self.sign,
            "match": self.match,
            "stages": {key: value.to_json() for key, value in self.stages.items()},
            "note": self.note,
        }


@dataclass(frozen=True)
class Table2Row:
    """Manifest entry for one explicit instance."""
    id: str
    family: str
    p: int
    k: int
    coeffs: Dict[str, Any]
    constraint: str = ""

    @property
    def field_spec(self) -> str:
        return f"{self.p}^{self.k}"


@dataclass
class RunRecord:
    """Reproducible record of one CLI run."""
    request: Dict[str, Any]
    version: str
    tower: Dict[str, Any]
    results: Dict[str, Any]
    duration_seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "request": self.request,
            "version": self.version,
            "tower": self.tower,
            "results": self.results,
            "duration_seconds": round(self.duration_seconds, 3),
        }


@dataclass
class BudgetConfig:
    """Size guards."""
    enumeration: int = 2 ** 24
    search: int = 2 ** 20
    rewrite_passes: int = 10000


@dataclass
class ComputeConfig:
    """Worker settings for sweeps."""
    workers: int = 0


@dataclass
class CacheConfig:
    """Result cache settings."""
    enabled: bool = True
    directory: str = "~/.cache/permupoly"


@dataclass
class LoggingConfig:
    """Logging settings."""
    level: str = "INFO"
    file: str = "~/.cache/permupoly/permupoly.log"
    max_size_mb: int = 10
    backup_count: int = 3


@dataclass
class Configuration:
    """
    Complete permupoly configuration.

    Loaded from ~/.config/permupoly/config.yaml
    """
    version: str = "1.0"
    budgets: BudgetConfig = field(default_factory=BudgetConfig)
    compute: ComputeConfig = field(default_factory=ComputeConfig)
    cache: CacheConfig = field(default_factory=CacheConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
