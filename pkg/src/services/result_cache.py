"""
Result cache for permupoly.

Stores expensive symbolic results (elimination reports) as JSON files under
the configured cache directory. Implements IResultCache interface.
"""

import json
import os
import re
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional

from src.interfaces.services import IResultCache
from src.lib.exceptions import CacheError
from src.lib.logging_config import get_logger

logger = get_logger(__name__)

_KEY_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


class ResultCache(IResultCache):
    """
    JSON documents keyed by name, one file per key.

    Default directory: ~/.cache/permupoly. With enabled=False every lookup
    misses and nothing is written.
    """

    def __init__(self, directory: Optional[str] = None, enabled: bool = True):
        """
        Initialize ResultCache.

        Args:
            directory: Cache directory. If None, uses ~/.cache/permupoly
            enabled: If False, the cache is a no-op
        """
        self.directory = Path(os.path.expanduser(directory or "~/.cache/permupoly"))
        self.enabled = enabled
        logger.debug(f"ResultCache initialized: dir={self.directory}, enabled={enabled}")

    def _path(self, key: str) -> Path:
        if not _KEY_RE.match(key):
            raise CacheError(f"Invalid cache key: {key!r}")
        return self.directory / f"{key}.json"

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        """
        Load a cached JSON document.

        Args:
            key: Cache key (letters, digits, '.', '_' and '-')

        Returns:
            The stored document, or None on a miss or an unreadable entry
        """
        if not self.enabled:
            return None
        path = self._path(key)
        if not path.exists():
            logger.debug(f"Cache miss: {key}")
            return None
        try:
            with open(path, encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Ignoring unreadable cache entry {path}: {e}")
            return None
        logger.debug(f"Cache hit: {key}")
        return data

    def put(self, key: str, value: Dict[str, Any]) -> Path:
        """
        Store a JSON document under key.

        The file is written to a temporary name and renamed into place.

        Raises:
            CacheError: If the entry cannot be written
        """
        path = self._path(key)
        if not self.enabled:
            return path
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, temp_path = tempfile.mkstemp(suffix='.tmp', prefix=f'{key}_', dir=str(self.directory))
            with os.fdopen(fd, 'w', encoding='utf-8') as f:
                json.dump(value, f, sort_keys=True)
            os.replace(temp_path, path)
        except OSError as e:
            raise CacheError(f"Failed to write cache entry {path}: {e}") from e
        logger.debug(f"Cached {key} at {path}")
        return path

    def clear(self) -> int:
        """
        Delete every cache entry.

        Returns:
            Number of entries removed

        Raises:
            CacheError: If some entries could not be removed
        """
        if not self.directory.exists():
            return 0

        errors = []
        removed = 0
        for entry in self.directory.glob('*.json'):
            try:
                entry.unlink()
                removed += 1
            except OSError as e:
                errors.append(f"{entry}: {e}")
                logger.error(f"Failed to remove cache entry {entry}: {e}")

        logger.info(f"Cache cleared: {removed} entries removed")
        if errors:
            raise CacheError(
                f"Cache clear completed with {len(errors)} errors:\n" + "\n".join(f"  - {e}" for e in errors)
            )
        return removed
