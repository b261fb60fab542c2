"""
Configuration

Loads config.yaml and merges it over the built-in defaults.
"""

import copy
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG: Dict[str, Any] = {
    "app": {
        "name": "laurent-rows",
        "debug": False,
    },
    "reduction": {
        "precision": 64,
    },
    "generator": {
        "degree_range": [-2, 2],
        "coefficient_bound": 2,
        "steps": 4,
    },
    "oracle": {
        "pair_budget": 200_000,
        "hilbert_degree": 3,
        "order": "degrevlex",
    },
    "database": {
        "enabled": False,
        "url": "sqlite:///laurent_rows.db",
    },
    "logging": {
        "level": "INFO",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        "file": None,
        "console": True,
    },
}


def merge_config(defaults: Dict[str, Any], overrides: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """Merge overrides into a copy of defaults, one level of sections deep."""
    merged = copy.deepcopy(defaults)
    for section, values in (overrides or {}).items():
        if isinstance(values, dict) and isinstance(merged.get(section), dict):
            merged[section] = {**merged[section], **values}
        else:
            merged[section] = values
    return merged


def load_config(path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Load configuration from a YAML file

    Args:
        path: Path to the YAML file; None or a missing file yields the defaults

    Returns:
        Merged configuration dictionary
    """
    if path is None:
        return merge_config(DEFAULT_CONFIG, None)

    path = Path(path)
    if not path.exists():
        logger.warning(f"Config file {path} not found, using defaults")
        return merge_config(DEFAULT_CONFIG, None)

    with open(path, "r", encoding="utf-8") as fh:
        loaded = yaml.safe_load(fh) or {}

    logger.debug(f"Loaded config from {path}")
    return merge_config(DEFAULT_CONFIG, loaded)
