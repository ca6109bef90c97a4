"""Configuration manager for spingreen."""

import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .errors import ParameterError

DEFAULT_CONFIG: Dict[str, Any] = {
    "numerics": {
        "rel_tol": 1e-14,
        "max_terms": 10000,
        "on_axis_tolerance": 1e-12,
        "pole_distance": 1e-10,
    },
    "execution": {
        "threads": 4,
    },
    "logging": {
        "level": "WARNING",
        "to_file": False,
        "to_console": True,
        "max_age_days": 30,
    },
    "output": {
        "default_format": "csv",
    },
    "units": {
        "system": "si",
    },
}


class ConfigManager:
    """Manages run configuration from YAML files and environment variables."""

    def __init__(self, config_path: Optional[Path] = None):
        self.config_path = Path(config_path) if config_path else Path(__file__).parent.parent / "config" / "config.yaml"
        self._config = None
        self.load_config()

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file and environment variables."""
        config = copy.deepcopy(DEFAULT_CONFIG)
        if self.config_path.exists():
            with open(self.config_path, 'r') as f:
                loaded = yaml.safe_load(f) or {}
            # Section-wise merge keeps defaults for keys the file omits
            for section, values in loaded.items():
                if isinstance(values, dict):
                    config.setdefault(section, {}).update(values)
                else:
                    config[section] = values

        threads = os.getenv("SPINGREEN_THREADS")
        if threads:
            try:
                config["execution"]["threads"] = int(threads)
            except ValueError:
                raise ParameterError(f"SPINGREEN_THREADS must be an integer, got {threads!r}")
            if config["execution"]["threads"] < 1:
                raise ParameterError("SPINGREEN_THREADS must be >= 1")

        if os.getenv("SPINGREEN_LOG_LEVEL"):
            config["logging"]["level"] = os.getenv("SPINGREEN_LOG_LEVEL")

        self._config = config
        return self._config

    def get_config(self) -> Dict[str, Any]:
        """Get the current configuration."""
        if self._config is None:
            self.load_config()
        return self._config

    def get_numerics_config(self) -> Dict[str, Any]:
        return self.get_config().get("numerics", {})

    def get_execution_config(self) -> Dict[str, Any]:
        return self.get_config().get("execution", {})

    def get_logging_config(self) -> Dict[str, Any]:
        return self.get_config().get("logging", {})

    def get_output_config(self) -> Dict[str, Any]:
        return self.get_config().get("output", {})

    def get_units_config(self) -> Dict[str, Any]:
        return self.get_config().get("units", {})

    def get_threads(self) -> int:
        return int(self.get_execution_config().get("threads", 1))

