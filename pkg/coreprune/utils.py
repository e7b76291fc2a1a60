"""Shared helpers for logging, seeded randomness, time, and JSON."""
from __future__ import annotations

import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np


# =============================================================================
# CONSTANTS
# =============================================================================

# Environment variable selecting the log level
LOG_ENV_VAR: str = "COREPRUNE_LOG"

LOG_LEVELS: dict[str, int] = {
    "error": logging.ERROR,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

DEFAULT_LOG_LEVEL: str = "error"

# Default seed for every randomized routine
DEFAULT_SEED: int = 0


# =============================================================================
# LOGGING
# =============================================================================

def setup_logging(level: str | None = None) -> int:
    """
    Configure the root logger from an explicit level or ``COREPRUNE_LOG``.

    Handlers write to stderr so stdout stays free for JSON/CSV output.

    Args:
        level: One of 'error', 'info', 'debug'. Defaults to the environment
               variable, then to 'error'.

    Returns:
        The numeric logging level that was applied.

    Example:
        >>> setup_logging("debug") == logging.DEBUG
        True
    """
    name = (level or os.environ.get(LOG_ENV_VAR) or DEFAULT_LOG_LEVEL).strip().lower()
    numeric = LOG_LEVELS.get(name)
    unknown = numeric is None
    if unknown:
        numeric = LOG_LEVELS[DEFAULT_LOG_LEVEL]

    logging.basicConfig(
        level=numeric,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    if unknown:
        logging.getLogger(__name__).error(
            "Unknown %s=%r, using %r", LOG_ENV_VAR, name, DEFAULT_LOG_LEVEL
        )
    return numeric


# =============================================================================
# RANDOMNESS
# =============================================================================

def make_rng(seed: int | None = DEFAULT_SEED) -> np.random.Generator:
    """
    Build a seeded numpy Generator.

    Args:
        seed: Integer seed. ``None`` draws fresh OS entropy.

    Returns:
        A PCG64-backed ``numpy.random.Generator``.

    Example:
        >>> make_rng(7).integers(100) == make_rng(7).integers(100)
        True
    """
    return np.random.default_rng(seed)


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """
    Derive ``count`` independent generators from one seed.

    Child streams come from ``SeedSequence.spawn`` so trial ``k`` always
    sees the same stream no matter how many siblings were requested.

    Args:
        seed: Parent seed.
        count: Number of child generators.

    Returns:
        List of generators, one per trial.

    Example:
        >>> a = spawn_rngs(3, 2)[1].random()
        >>> b = spawn_rngs(3, 5)[1].random()
        >>> a == b
        True
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


def derive_seeds(seed: int, count: int) -> list[int]:
    """Integer seeds for ``count`` independent sub-tasks (same spawn tree)."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint32)[0]) for child in children]


# =============================================================================
# TIME UTILITIES
# =============================================================================

def utc_now_iso() -> str:
    """
    Get current UTC time as ISO 8601 formatted string.

    Example:
        >>> utc_now_iso()  # doctest: +SKIP
        '2026-02-10T15:30:45.123456+00:00'
    """
    return datetime.now(timezone.utc).isoformat()


# =============================================================================
# JSON UTILITIES
# =============================================================================

def to_jsonable(value: Any) -> Any:
    """
    Recursively convert numpy scalars/arrays into plain Python values.

    Example:
        >>> to_jsonable({"a": np.arange(3), "b": np.float64(0.5)})
        {'a': [0, 1, 2], 'b': 0.5}
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def dumps_json(payload: Any) -> str:
    """Serialize with sorted keys and a trailing newline (byte-stable)."""
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"


def write_json(path: str | Path, payload: Any) -> Path:
    """Write ``payload`` as byte-stable JSON and return the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_json(payload))
    return path


def read_json(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as f:
        return json.load(f)
