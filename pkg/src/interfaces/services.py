"""
Service Interfaces

Defines the interface contracts for configuration, result caching and
permutation checking. These interfaces ensure consistent behavior across all
implementations.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from src.models.entities import CoeffSet, CompletenessVerdict, Configuration, PermVerdict


class IConfigurationManager(ABC):
    """Interface for configuration management."""

    @abstractmethod
    def load_config(self) -> Configuration:
        """
        Load configuration from file or create defaults.

        Returns:
            Configuration object

        Raises:
            ConfigurationError: If config invalid
        """
        pass

    @abstractmethod
    def save_config(self, config: Configuration) -> None:
        """
        Save configuration to file.

        Args:
            config: Configuration to persist

        Raises:
            ConfigurationError: If save fails
        """
        pass

    @abstractmethod
    def validate_config(self, config: Configuration) -> bool:
        """
        Validate configuration against schema.

        Args:
            config: Configuration to validate

        Returns:
            True if valid

        Raises:
            ConfigurationError: If validation fails with specific errors
        """
        pass

    @abstractmethod
    def resolve_budget(self, kind: str, override: Optional[int] = None) -> int:
        """
        Effective budget of one kind ('enumeration' or 'search').

        Precedence: override > PERMUPOLY_BUDGET > config file > default.
        """
        pass


class IResultCache(ABC):
    """Interface for the on-disk cache of expensive symbolic results."""

    @abstractmethod
    def get(self, key: str) -> Optional[Dict[str, Any]]:
        """
        Load a cached JSON document.

        Returns:
            The stored document, or None on a miss or an unreadable entry
        """
        pass

    @abstractmethod
    def put(self, key: str, value: Dict[str, Any]) -> Path:
        """
        Store a JSON document under key.

        Returns:
            Path of the written entry

        Raises:
            CacheError: If the entry cannot be written
        """
        pass

    @abstractmethod
    def clear(self) -> int:
        """
        Delete every cache entry.

        Returns:
            Number of entries removed
        """
        pass


class IPermutationChecker(ABC):
    """Interface for bijectivity checks over the whole of F_{q^3}."""

    @abstractmethod
    def is_permutation(self, family: str, coeffs: CoeffSet) -> PermVerdict:
        """
        Decide whether a family instance permutes F_{q^3}.

        Raises:
            BudgetExceededError: If q^3 is above the enumeration budget
        """
        pass

    @abstractmethod
    def is_permutation_raw(self, exps: Sequence[int], coeffs: Sequence[Any]) -> PermVerdict:
        """
        Decide whether sum(c_i x^{e_i}) permutes F_{q^3}.

        Raises:
            CoefficientError: If the two lists differ in length
        """
        pass

    @abstractmethod
    def is_complete(self, family: str, coeffs: CoeffSet, epsilon: Optional[Any] = None) -> CompletenessVerdict:
        """
        Verdicts for f and f + εx (ε defaults to 1) from one pass.
        """
        pass
