"""
Settings Module — Load the built-in YAML defaults.

Each component receives its own section dict and reads keys with
`.get(key, default)`, so a missing section never breaks start-up.
"""

import os
import copy
import logging
import yaml

logger = logging.getLogger(__name__)

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT_CONFIG_PATH = os.path.join(PROJECT_ROOT, "config", "settings.yaml")


def load_config(config_path=DEFAULT_CONFIG_PATH):
    """
    Load configuration from a YAML file.

    Args:
        config_path: Path to the YAML file.

    Returns:
        dict: Parsed configuration (empty dict if the file is empty).
    """
    with open(config_path, "r") as f:
        config = yaml.safe_load(f) or {}
    logger.debug("Loaded configuration from %s", config_path)
    return config


def apply_overrides(config, section, **overrides):
    """
    Return a copy of `config` with non-None overrides written into `section`.

    Args:
        config: Full configuration dict.
        section: Section name, e.g. 'shape_invariance'.
        **overrides: key=value pairs; None values are skipped.

    Returns:
        dict: New configuration dict.
    """
    updated = copy.deepcopy(config)
    target = updated.setdefault(section, {})
    for key, value in overrides.items():
        if value is not None:
            target[key] = value
    return updated
