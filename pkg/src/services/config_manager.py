"""
Configuration Manager for permupoly.

Handles loading, saving, and validating configuration from YAML file.
Implements IConfigurationManager interface.
"""

import os
from pathlib import Path
from typing import Optional

import yaml

from src.interfaces.services import IConfigurationManager
from src.lib.exceptions import ConfigurationError
from src.lib.logging_config import get_logger
from src.models.entities import Configuration

logger = get_logger(__name__)

BUDGET_ENV_VAR = "PERMUPOLY_BUDGET"
BUDGET_KINDS = ("enumeration", "search")


class ConfigurationManager(IConfigurationManager):
    """
    Manages configuration loading, saving, and validation.

    Default config location: ~/.config/permupoly/config.yaml
    """

    DEFAULT_CONFIG_PATH = Path.home() / ".config" / "permupoly" / "config.yaml"

    def __init__(self, config_path: Optional[Path] = None):
        """
        Initialize ConfigurationManager.

        Args:
            config_path: Path to config file. If None, uses default location.
        """
        self.config_path = config_path or self.DEFAULT_CONFIG_PATH
        self._config: Optional[Configuration] = None
        logger.debug(f"ConfigurationManager initialized with path: {self.config_path}")

    def load_config(self) -> Configuration:
        """
        Load configuration from file or create defaults.

        Returns:
            Configuration object

        Raises:
            ConfigurationError: If config invalid
        """
        if not self.config_path.exists():
            logger.debug(f"Config file not found at {self.config_path}, using defaults")
            self._config = Configuration()
            return self._config

        try:
            with open(self.config_path, encoding='utf-8') as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Invalid YAML in config file: {e}") from e
        except OSError as e:
            raise ConfigurationError(f"Failed to load configuration: {e}") from e

        if not data:
            logger.warning(f"Empty config file at {self.config_path}, using defaults")
            self._config = Configuration()
            return self._config
        if not isinstance(data, dict):
            raise ConfigurationError(f"Config file {self.config_path} must contain a mapping")

        config = self._merge_with_defaults(data)
        self.validate_config(config)

        logger.debug(f"Configuration loaded from {self.config_path}")
        self._config = config
        return config

    def save_config(self, config: Configuration) -> None:
        """
        Save configuration to file.

        Args:
            config: Configuration to persist

        Raises:
            ConfigurationError: If save fails
        """
        self.validate_config(config)
        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, 'w', encoding='utf-8') as f:
                yaml.dump(self._config_to_dict(config), f, default_flow_style=False, sort_keys=False)
        except OSError as e:
            raise ConfigurationError(f"Failed to save configuration: {e}") from e

        logger.info(f"Configuration saved successfully to {self.config_path}")

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
        errors = []

        for kind in BUDGET_KINDS:
            value = getattr(config.budgets, kind)
            if not isinstance(value, int) or value <= 0:
                errors.append(f"budgets.{kind} must be a positive integer")

        if not isinstance(config.budgets.rewrite_passes, int) or config.budgets.rewrite_passes <= 0:
            errors.append("budgets.rewrite_passes must be a positive integer")

        if not isinstance(config.compute.workers, int) or config.compute.workers < 0:
            errors.append("compute.workers must be 0 (available parallelism) or a positive integer")

        if not config.cache.directory:
            errors.append("cache.directory must not be empty")

        if config.logging.level not in ['DEBUG', 'INFO', 'WARNING', 'ERROR']:
            errors.append("logging.level must be DEBUG, INFO, WARNING, or ERROR")

        if config.logging.max_size_mb <= 0:
            errors.append("logging.max_size_mb must be positive")

        if errors:
            error_msg = "Configuration validation failed:\n" + "\n".join(f"  - {e}" for e in errors)
            raise ConfigurationError(error_msg)

        return True

    def resolve_budget(self, kind: str, override: Optional[int] = None) -> int:
        """
        Effective budget of one kind.

        Args:
            kind: 'enumeration' or 'search'
            override: Value from the command line, if given

        Returns:
            override, else PERMUPOLY_BUDGET, else the config file value (or default)

        Raises:
            ConfigurationError: If kind is unknown or PERMUPOLY_BUDGET is not a positive integer
        """
        if kind not in BUDGET_KINDS:
            raise ConfigurationError(f"Unknown budget kind: {kind}")
        if override is not None:
            return override

        env = os.environ.get(BUDGET_ENV_VAR)
        if env:
            try:
                value = int(env)
            except ValueError as e:
                raise ConfigurationError(f"{BUDGET_ENV_VAR} must be an integer, got {env!r}") from e
            if value <= 0:
                raise ConfigurationError(f"{BUDGET_ENV_VAR} must be positive, got {value}")
            return value

        config = self._config or self.load_config()
        return getattr(config.budgets, kind)

    def _merge_with_defaults(self, data: dict) -> Configuration:
        """
        Merge loaded configuration with defaults.

        Args:
            data: Loaded YAML data

        Returns:
            Configuration with defaults applied for missing fields
        """
        config = Configuration()

        if 'version' in data:
            config.version = str(data['version'])

        if 'budgets' in data:
            b = data['budgets'] or {}
            if 'enumeration' in b:
                config.budgets.enumeration = b['enumeration']
            if 'search' in b:
                config.budgets.search = b['search']
            if 'rewrite_passes' in b:
                config.budgets.rewrite_passes = b['rewrite_passes']

        if 'compute' in data:
            c = data['compute'] or {}
            if 'workers' in c:
                config.compute.workers = c['workers']

        if 'cache' in data:
            c = data['cache'] or {}
            if 'enabled' in c:
                config.cache.enabled = bool(c['enabled'])
            if 'directory' in c:
                config.cache.directory = c['directory']

        if 'logging' in data:
            logging_cfg = data['logging'] or {}
            if 'level' in logging_cfg:
                config.logging.level = logging_cfg['level']
            if 'file' in logging_cfg:
                config.logging.file = logging_cfg['file']
            if 'max_size_mb' in logging_cfg:
                config.logging.max_size_mb = logging_cfg['max_size_mb']
            if 'backup_count' in logging_cfg:
                config.logging.backup_count = logging_cfg['backup_count']

        return config

    def _config_to_dict(self, config: Configuration) -> dict:
        """
        Convert Configuration object to dictionary for YAML serialization.

        Args:
            config: Configuration object

        Returns:
            Dictionary representation
        """
        return {
            'version': config.version,
            'budgets': {
                'enumeration': config.budgets.enumeration,
                'search': config.budgets.search,
                'rewrite_passes': config.budgets.rewrite_passes,
            },
            'compute': {
                'workers': config.compute.workers,
            },
            'cache': {
                'enabled': config.cache.enabled,
                'directory': config.cache.directory,
            },
            'logging': {
                'level': config.logging.level,
                'file': config.logging.file,
                'max_size_mb': config.logging.max_size_mb,
                'backup_count': config.logging.backup_count,
            },
        }
