"""Configuration manager singleton for centralized config loading.

Loads src/config/config.yaml once (path overridable via BP_ENGINE_CONFIG)
and serves dot-path lookups to the command layer.
"""

import os
from pathlib import Path
from typing import Any, Dict

import yaml

from src.utils.logging_factory import LoggingFactory


class ConfigError(Exception):
    """Custom exception for configuration errors."""


class ConfigManager:
    """Singleton config manager.

    Usage:
        from src.utils.config_manager import ConfigManager
        config = ConfigManager.get_config()
        bound = ConfigManager.get_nested("engine.default_max_degree", 20)
    """

    _config = None
    _config_path = "src/config/config.yaml"
    ENV_CONFIG_PATH = "BP_ENGINE_CONFIG"

    @classmethod
    def config_path(cls) -> str:
        """Resolve the active config file path (environment wins)."""
        return os.environ.get(cls.ENV_CONFIG_PATH, cls._config_path)

    @classmethod
    def get_config(cls) -> Dict:
        """Get configuration dictionary (loaded once, then cached).

        Returns:
            Configuration dictionary from YAML file

        Raises:
            ConfigError: If config file not found or invalid YAML
        """
        if cls._config is None:
            cls._config = cls._load_config()
        return cls._config

    @classmethod
    def _load_config(cls) -> Dict:
        """Load and parse configuration file.

        Raises:
            ConfigError: If file not found or YAML parsing fails
        """
        path = cls.config_path()
        if not Path(path).exists():
            raise ConfigError(f"Configuration file not found: {path}")

        try:
            with open(path, "r", encoding="utf-8") as file:
                config = yaml.safe_load(file)
        except yaml.YAMLError as e:
            raise ConfigError(f"Failed to parse configuration YAML: {e}") from e
        except OSError as e:
            raise ConfigError(f"Could not read configuration: {e}") from e

        if not isinstance(config, dict):
            raise ConfigError(f"Configuration file is empty or invalid: {path}")

        LoggingFactory.get_logger(__name__).debug("Configuration loaded from %s", path)
        return config

    @classmethod
    def reload_config(cls) -> Dict:
        """Force reload configuration from file."""
        cls._config = None
        LoggingFactory.get_logger(__name__).info(
            "Configuration cache cleared, reloading from file"
        )
        return cls.get_config()

    @classmethod
    def get_nested(cls, key_path: str, default: Any = None) -> Any:
        """Get nested config value using dot notation.

        Args:
            key_path: Dot-separated path (e.g., "cache.directory")
            default: Default value if key not found

        Returns:
            Config value or default
        """
        value: Any = cls.get_config()
        for key in key_path.split("."):
            if not isinstance(value, dict):
                return default
            value = value.get(key)
            if value is None:
                return default
        return value

    @classmethod
    def get_section(cls, section: str) -> Dict:
        """Get a specific section of config (empty dict when absent)."""
        return cls.get_config().get(section, {}) or {}
