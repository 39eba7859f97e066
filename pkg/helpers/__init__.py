"""
Helper modules shared by the CLI, scripts and tests
"""

from .config_loader import load_config, get_config_value, get_project_root, DEFAULT_CONFIG

__all__ = [
    'load_config',
    'get_config_value',
    'get_project_root',
    'DEFAULT_CONFIG',
]
