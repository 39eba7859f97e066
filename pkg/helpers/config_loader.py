"""
Centralized configuration loading for the CLI, scripts and tests
"""

import copy
import yaml
from pathlib import Path
from typing import Dict, Any, Optional
from loguru import logger


DEFAULT_CONFIG: Dict[str, Any] = {
    "bounds": {
        "max_order": 1_000_000,
        "subgroup_scan": 2000,
        "quotient_degree": 10_000,
        "max_degree": 100_000,
        "search_budget": 10_000_000,
    },
    "run": {"seed": 42, "jobs": 1},
    "logging": {"level": "INFO", "file": "cn_groups.log"},
    "catalog": {"directory": "catalog"},
}


def get_project_root() -> Path:
    """Get the project root directory"""
    # This helper is in helpers/, so project root is parent directory
    return Path(__file__).parent.parent


def load_config(config_name: str = "config.yaml", config_path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Load configuration from a YAML file.

    Args:
        config_name: Name of the file inside the project's config/ directory
        config_path: Explicit path; overrides config_name when given

    Returns:
        Dictionary containing the configuration data. Missing sections are
        filled from DEFAULT_CONFIG so callers never see a partial config.

    Examples:
        config = load_config()  # Loads config/config.yaml
        config = load_config(config_path=Path("/tmp/bounds.yaml"))
    """
    if config_path is None:
        config_path = get_project_root() / "config" / config_name

    merged = copy.deepcopy(DEFAULT_CONFIG)
    try:
        with open(config_path, 'r') as f:
            config_data = yaml.safe_load(f) or {}
    except FileNotFoundError:
        logger.warning(f"Config file not found: {config_path}")
        return merged
    except Exception as e:
        logger.warning(f"Failed to load config from {config_path}: {e}")
        return merged

    for section, values in config_data.items():
        if isinstance(values, dict) and isinstance(merged.get(section), dict):
            merged[section].update(values)
        else:
            merged[section] = values
    return merged


def get_config_value(key_path: str, config_name: str = "config.yaml", default: Any = None,
                     config: Optional[Dict[str, Any]] = None) -> Any:
    """
    Get a specific configuration value using dot notation.

    Args:
        key_path: Dot-separated path to the config value (e.g., "bounds.max_order")
        config_name: Name of the config file to load when no config is passed
        default: Default value to return if key is not found
        config: An already loaded configuration to read from

    Examples:
        seed = get_config_value("run.seed", default=42)
    """
    if config is None:
        config = load_config(config_name)

    value = config
    try:
        for key in key_path.split('.'):
            value = value[key]
        return value
    except (KeyError, TypeError):
        return default
