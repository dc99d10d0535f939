#!/usr/bin/env python
import copy
import os
import json
import logging

from .config_validator import (DEFAULT_CONFIG, fill_defaults, nest_flat_keys, sanitize_configuration,
                               validate_configuration)

logger = logging.getLogger(__name__)


class ConfigError(Exception):
    """Raised when an explicitly requested config file cannot be used."""
    pass


class ConfigManager:
    """Read-only view of the germext run configuration.

    The file may use sections ({"borel": {"J": 4}}) or flag names at the top
    level ({"J": 4}). Absent fields take their defaults and invalid values
    are replaced by sanitize.
    """

    def __init__(self, config_file=None, project_root=None):
        """
        Args:
            config_file: Explicit config path. Unlike the default
                <project_root>/config.json it must exist and parse.
            project_root: Directory searched for config.json
        """
        self.project_root = project_root or os.path.abspath(
            os.path.join(os.path.dirname(__file__), '..')
        )
        self.explicit = config_file is not None
        self.config_file = config_file or os.path.join(self.project_root, "config.json")
        self.config = self._load_config()

    def _read_file(self):
        try:
            with open(self.config_file, 'r') as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            if self.explicit:
                raise ConfigError(f"Cannot read config {self.config_file}: {e}") from e
            logger.error(f"Error loading config, falling back to defaults: {e}")
            return None

    def _load_config(self):
        if not os.path.exists(self.config_file):
            if self.explicit:
                raise ConfigError(f"Config file not found: {self.config_file}")
            logger.info(f"No config at {self.config_file}, using defaults")
            return copy.deepcopy(DEFAULT_CONFIG)

        config = self._read_file()
        if config is None:
            return copy.deepcopy(DEFAULT_CONFIG)
        if not isinstance(config, dict):
            raise ConfigError(f"Config {self.config_file} must hold a JSON object")

        config, unknown = nest_flat_keys(config)
        if unknown:
            message = f"Unknown top-level keys in {self.config_file}: {unknown}"
            if self.explicit:
                raise ConfigError(message)
            logger.warning(f"{message}, ignoring them")
        config = fill_defaults(config)

        is_valid, errors = validate_configuration(config)
        if not is_valid:
            logger.warning(f"Invalid config values in {self.config_file}: {errors}")
            config = sanitize_configuration(config)
        return config

    def get(self, section, key=None, default=None):
        """Look up a config value.

        Args:
            section: Section name, e.g. "kmap" or "borel"
            key: Key inside the section; None returns the whole section
            default: Returned when the section or key is absent

        Returns:
            The stored value or default
        """
        data = self.config.get(section, {} if key is not None else default)
        if key is None:
            return data
        return data.get(key, default) if isinstance(data, dict) else default

    def get_suite_config(self, suite_name):
        """Per-suite settings from suites.settings.<suite_name>, or {}."""
        settings = self.get("suites", "settings", {}) or {}
        return settings.get(suite_name, {})
