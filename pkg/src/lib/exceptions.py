"""
Exception definitions for permupoly.

Provides the exception hierarchy used throughout the toolkit.
All exceptions inherit from PermupolyError, which carries a message plus
troubleshooting hints that the CLI prints underneath the error.
"""

from typing import Any, Optional


class PermupolyError(Exception):
    """
    Base exception for all permupoly errors.

    All custom exceptions include:
    - Descriptive error message
    - Troubleshooting steps
    """

    def __init__(self, message: str, troubleshooting: Optional[str] = None) -> None:
        """
        Initialize PermupolyError.

        Args:
            message: Primary error message
            troubleshooting: Optional troubleshooting guidance
        """
        self.message = message
        self.troubleshooting = troubleshooting or self._default_troubleshooting()
        super().__init__(self._format_message())

    def _format_message(self) -> str:
        """Format complete error message with troubleshooting."""
        if self.troubleshooting:
            return f"{self.message}\n\nTroubleshooting:\n{self.troubleshooting}"
        return self.message

    def _default_troubleshooting(self) -> str:
        """Default troubleshooting steps."""
        return (
            "• Check configuration: permupoly validate-config\n"
            "• Re-run with --verbose and review the log file"
        )


# Field construction and arithmetic
class FieldSpecError(PermupolyError):
    """Field specification is malformed or describes no valid tower."""

    def __init__(self, message: str, troubleshooting: Optional[str] = None) -> None:
        if troubleshooting is None:
            troubleshooting = (
                "• Field specs look like '7^1' or '7^1:0,1:1,0,1,1'\n"
                "• p must be an odd prime, k ≥ 1\n"
                "• g (degree k) and h (degree 3) must be monic irreducibles, coefficients low-to-high\n"
                "• Omit g and h to let the tower pick the smallest irreducibles"
            )
        super().__init__(message, troubleshooting)


class FieldArithmeticError(PermupolyError):
    """Arithmetic operation undefined in the field (division by zero)."""

    def __init__(self, message: str = "Division by zero in F_{q^3}") -> None:
        super().__init__(message, "• Inverse and division require a nonzero operand")


class BudgetExceededError(PermupolyError):
    """Requested enumeration or search exceeds the configured budget."""

    def __init__(self, kind: str, requested: int, budget: int) -> None:
        self.kind = kind
        self.requested = requested
        self.budget = budget
        message = f"{kind} size {requested} exceeds budget {budget}"
        troubleshooting = (
            "• Raise the budget with --budget <n> or PERMUPOLY_BUDGET=<n>\n"
            "• Persist a larger default under 'budgets' in the config file\n"
            "• Exhaustive checks are meant for desk-scale fields (q^3 ≤ 2^24)"
        )
        super().__init__(message, troubleshooting)


# Families and theorems
class UnknownFamilyError(PermupolyError):
    """Family or theorem identifier is not one of the nine supported ids."""

    def __init__(self, family_id: str) -> None:
        self.family_id = family_id
        super().__init__(
            f"Unknown family/theorem id: {family_id}",
            "• Valid ids: T31, T33, T34, T35, T36, T37, T38, T39, T310",
        )


class UnknownTheoremError(UnknownFamilyError):
    """Theorem id has no derivation or pipeline of the requested kind."""


class CoefficientError(PermupolyError):
    """Coefficient set does not match the slots demanded by the family."""

    def __init__(self, message: str, troubleshooting: Optional[str] = None) -> None:
        if troubleshooting is None:
            troubleshooting = (
                "• T31 takes A in F_{q^3} (integer, or list of three base elements)\n"
                "• Other families take A, B, C, D in F_q as the family requires\n"
                "• Example: --coeffs '{\"A\":1,\"B\":2,\"C\":3}'"
            )
        super().__init__(message, troubleshooting)


# Symbolic engine
class PolynomialError(PermupolyError):
    """Base class for symbolic engine failures."""

    def __init__(self, message: str, troubleshooting: Optional[str] = None) -> None:
        super().__init__(message, troubleshooting or "• Check the variable sets and degrees of the inputs")


class VarSetMismatchError(PolynomialError):
    """Operands are defined over different variable sets."""


class InexactDivisionError(PolynomialError):
    """Exact division left a nonzero remainder."""

    def __init__(self, dividend: Any, divisor: Any, remainder: Any) -> None:
        self.dividend = dividend
        self.divisor = divisor
        self.remainder = remainder
        super().__init__(
            f"Division by {divisor} is not exact (remainder {remainder})",
            "• A factor expected by the pipeline does not divide the resultant\n"
            "• Compare the system equations against the elimination script",
        )


class RewriteLimitError(PolynomialError):
    """Substitution rewrite did not reach a fixpoint within the pass cap."""

    def __init__(self, monomial: Any, passes: int) -> None:
        self.monomial = monomial
        self.passes = passes
        super().__init__(
            f"Rewriting {monomial} did not terminate after {passes} passes",
            "• The replacement re-introduces the monomial it replaces\n"
            "• Raise budgets.rewrite_passes only if the rule is known to terminate",
        )


class DegreeError(PolynomialError):
    """Polynomial has the wrong degree in the elimination variable."""


class UnassignedVariableError(PolynomialError):
    """Evaluation assignment misses a variable that occurs in the polynomial."""


class NotationError(PolynomialError):
    """Printed-notation polynomial text could not be parsed."""


class PipelineError(PermupolyError):
    """Elimination pipeline failed a stage check."""

    def __init__(self, message: str, troubleshooting: Optional[str] = None) -> None:
        if troubleshooting is None:
            troubleshooting = (
                "• Inspect the stage log with --verbose\n"
                "• Clear cached reports: remove the cache directory and re-run"
            )
        super().__init__(message, troubleshooting)


class DerivationError(PermupolyError):
    """Auxiliary polynomial derivation produced an unexpected shape."""


# Configuration and storage
class ConfigurationError(PermupolyError):
    """Configuration file is missing, malformed, or invalid."""

    def __init__(self, message: str, troubleshooting: Optional[str] = None) -> None:
        if troubleshooting is None:
            troubleshooting = (
                "• Validate config: permupoly validate-config\n"
                "• Recreate defaults: permupoly init --force\n"
                "• Config location: ~/.config/permupoly/config.yaml"
            )
        super().__init__(message, troubleshooting)


class CacheError(PermupolyError):
    """Result cache could not be read or written."""

    def __init__(self, message: str) -> None:
        super().__init__(
            message,
            "• Check write permissions on the cache directory\n"
            "• Disable caching with cache.enabled: false",
        )
