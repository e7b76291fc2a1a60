"""
CorePrune Configuration
=======================

Loads and validates configuration for the coreprune package.
Configuration is stored in the main config.yaml under the 'coreprune' key.

Usage:
------
    from coreprune.config import get_config, get_geometry_config

    config = get_config()
    geometry = get_geometry_config()
"""

from __future__ import annotations

import copy
from pathlib import Path
from typing import Any

import yaml

from . import PROJECT_ROOT
from .errors import InvalidParameter


# =============================================================================
# DEFAULT CONFIGURATION
# =============================================================================
# These defaults are used if not specified in config.yaml

DEFAULT_CONFIG: dict[str, Any] = {
    "geometry": {
        "rank_tol": 1e-8,
        "eps_mvee": 1e-6,
        "max_iter": 100_000,
    },

    "caratheodory": {
        "feasibility_tol": 1e-8,
        "max_condition": 1e14,
    },

    "sampling": {
        "coreset_size": 100,
        "bound_constant": 1.0,
    },

    "linf": {
        "trials": 1000,
        "query_columns": 1,
    },

    "complexity": {
        "queries": 200,
        "refine_steps": 40,
    },

    "evaluation": {
        "activation": "relu",
        "queries": 1000,
    },

    "pruning": {
        "probe_inputs": 1000,
        "reduce_method": None,
        "reduce_dim": None,
    },

    "cli": {
        "seed": 0,
        "format": "json",
    },
}

DEFAULT_CONFIG_PATH: Path = PROJECT_ROOT / "config.yaml"


# =============================================================================
# CONFIGURATION LOADING
# =============================================================================

def load_main_config(path: str | Path | None = None) -> dict[str, Any]:
    """
    Load the main config.yaml file.

    Args:
        path: Alternate config file. Defaults to config.yaml in the project root.

    Returns:
        dict: Full configuration dictionary

    Raises:
        FileNotFoundError: If the config file doesn't exist
        InvalidParameter: If the file is not valid YAML or not a mapping
    """
    config_path = Path(path) if path else DEFAULT_CONFIG_PATH

    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    with open(config_path, "r", encoding="utf-8") as f:
        try:
            loaded = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise InvalidParameter(f"{config_path}: invalid YAML ({exc})") from exc

    if not isinstance(loaded, dict):
        raise InvalidParameter(f"{config_path}: top level must be a mapping, got {type(loaded).__name__}")
    return loaded


def get_config(path: str | Path | None = None) -> dict[str, Any]:
    """
    Get the coreprune configuration with defaults applied.

    Args:
        path: Alternate config file (the CLI's --config flag).

    Returns:
        dict: Merged configuration (defaults + config.yaml overrides)
    """
    try:
        main_config = load_main_config(path)
        user_config = main_config.get("coreprune", {}) or {}
    except FileNotFoundError:
        user_config = {}

    if not isinstance(user_config, dict):
        raise InvalidParameter(f"coreprune: section must be a mapping, got {type(user_config).__name__}")
    user_config = {name: section for name, section in user_config.items() if section is not None}
    for name, section in user_config.items():
        if name in DEFAULT_CONFIG and not isinstance(section, dict):
            raise InvalidParameter(f"coreprune.{name}: section must be a mapping, got {type(section).__name__}")

    return _deep_merge(copy.deepcopy(DEFAULT_CONFIG), user_config)


def _deep_merge(base: dict, override: dict) -> dict:
    """
    Deep merge two dictionaries. Override values take precedence.

    Args:
        base: Base dictionary with defaults
        override: Override dictionary with user values

    Returns:
        dict: Merged dictionary
    """
    result = base.copy()

    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value

    return result


# =============================================================================
# CONVENIENCE GETTERS
# =============================================================================

def _section(name: str, path: str | Path | None = None) -> dict[str, Any]:
    return get_config(path).get(name, DEFAULT_CONFIG[name])


def get_geometry_config(path: str | Path | None = None) -> dict[str, Any]:
    """
    Get geometry tolerances.

    Returns:
        dict: 'rank_tol', 'eps_mvee', 'max_iter'
    """
    return _section("geometry", path)


def get_caratheodory_config(path: str | Path | None = None) -> dict[str, Any]:
    """
    Get Carathéodory LP settings.

    Returns:
        dict: 'feasibility_tol', 'max_condition'
    """
    return _section("caratheodory", path)


def get_sampling_config(path: str | Path | None = None) -> dict[str, Any]:
    return _section("sampling", path)


def get_linf_config(path: str | Path | None = None) -> dict[str, Any]:
    return _section("linf", path)


def get_complexity_config(path: str | Path | None = None) -> dict[str, Any]:
    return _section("complexity", path)


def get_evaluation_config(path: str | Path | None = None) -> dict[str, Any]:
    return _section("evaluation", path)


def get_pruning_config(path: str | Path | None = None) -> dict[str, Any]:
    """
    Get pruning settings.

    Returns:
        dict: 'probe_inputs', 'reduce_method' (None, 'pca' or
        'gaussian_projection') and 'reduce_dim'
    """
    return _section("pruning", path)


def get_cli_config(path: str | Path | None = None) -> dict[str, Any]:
    return _section("cli", path)




# =============================================================================
# VALIDATION
# =============================================================================

def _number(value: Any) -> float | None:
    """Numeric config value as float; None for anything non-numeric."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return None
    return float(value)


def validate_config(path: str | Path | None = None) -> list[str]:
    """
    Validate the current configuration.

    Returns:
        list: List of validation error messages (empty if valid)

    Raises:
        InvalidParameter: If the file itself cannot be read as a config
    """
    errors = []
    config = get_config(path)

    def check(section: str, key: str, ok, message: str) -> None:
        value = _number(config[section].get(key))
        if value is None or not ok(value):
            errors.append(f"{section}: {key} {message}, got {config[section].get(key)!r}")

    check("geometry", "rank_tol", lambda v: v > 0, "must be positive")
    check("geometry", "eps_mvee", lambda v: 0 < v < 1, "must be in (0, 1)")
    check("geometry", "max_iter", lambda v: v >= 1, "must be at least 1")

    check("caratheodory", "feasibility_tol", lambda v: v > 0, "must be positive")
    check("caratheodory", "max_condition", lambda v: v > 1, "must exceed 1")

    check("sampling", "coreset_size", lambda v: v >= 1, "must be at least 1")
    check("sampling", "bound_constant", lambda v: v > 0, "must be positive")

    check("linf", "trials", lambda v: v >= 1, "must be at least 1")
    check("linf", "query_columns", lambda v: v >= 1, "must be at least 1")

    check("complexity", "queries", lambda v: v >= 1, "must be at least 1")
    check("complexity", "refine_steps", lambda v: v >= 0, "must be non-negative")

    check("evaluation", "queries", lambda v: v >= 1, "must be at least 1")
    activation = config["evaluation"].get("activation")
    if activation not in ("relu", "hinge", "logloss", "softplus", "abs"):
        errors.append(f"evaluation: unknown activation {activation!r}")

    check("pruning", "probe_inputs", lambda v: v >= 1, "must be at least 1")
    pruning = config["pruning"]
    method = pruning.get("reduce_method")
    if method not in (None, "pca", "gaussian_projection"):
        errors.append(f"pruning: unknown reduce_method {method!r}")
    elif method is not None and not pruning.get("reduce_dim"):
        errors.append("pruning: reduce_dim is required when reduce_method is set")

    check("cli", "seed", lambda v: v >= 0 and v == int(v), "must be a non-negative integer")
    fmt = config["cli"].get("format")
    if fmt not in ("json", "csv"):
        errors.append(f"cli: format must be 'json' or 'csv', got {fmt!r}")

    return errors
