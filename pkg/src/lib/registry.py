"""
Loaders for the packaged data files (theorem registry, explicit-instance manifest).
"""

from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List

import yaml

from src.lib.exceptions import ConfigurationError, UnknownTheoremError
from src.lib.logging_config import get_logger

logger = get_logger(__name__)

DATA_DIR = Path(__file__).parent


def data_path(name: str) -> Path:
    return DATA_DIR / name


def read_data_text(name: str) -> str:
    path = data_path(name)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Packaged data file missing: {path}") from e


@lru_cache(maxsize=None)
def _load_yaml(name: str) -> Dict[str, Any]:
    try:
        data = yaml.safe_load(read_data_text(name))
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Packaged data file {name} is not valid YAML: {e}") from e
    logger.debug(f"Loaded data file {name}")
    return data or {}


def theorem_entry(theorem: str) -> Dict[str, Any]:
    """Registry entry (slots, relation, hypotheses) of one theorem."""
    theorems = _load_yaml("theorems.yaml").get("theorems", {})
    if theorem not in theorems:
        raise UnknownTheoremError(theorem)
    return theorems[theorem]


def printed_entries() -> Dict[str, Dict[str, Any]]:
    return _load_yaml("theorems.yaml").get("printed", {})


def table2_rows() -> List[Dict[str, Any]]:
    return list(_load_yaml("table2.yaml").get("rows", []))
