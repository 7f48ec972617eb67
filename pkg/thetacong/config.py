"""Configuration and constants for thetacong.

This module defines default values and environment variable overrides.
All environment variables are prefixed with THETACONG_.
"""

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Optional

from loguru import logger
from omegaconf import OmegaConf

from .exceptions import ThetaCongDomainError


def get_env_int(key: str, default: int) -> int:
    """Get integer from environment variable."""
    value = os.environ.get(key)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        return default


def get_env_bool(key: str, default: bool) -> bool:
    """Get boolean from environment variable."""
    value = os.environ.get(key, "").lower()
    if value in ("1", "true", "yes", "on"):
        return True
    elif value in ("0", "false", "no", "off"):
        return False
    return default


# ==================== Search Budgets ====================

# x = p/e^2 candidates: |p| <= MAX_NUMERATOR
DEFAULT_MAX_NUMERATOR = get_env_int("THETACONG_MAX_NUMERATOR", 10**6)

# x = p/e^2 candidates: e <= MAX_DENOMINATOR; also bounds conic base-point denominators
DEFAULT_MAX_DENOMINATOR = get_env_int("THETACONG_MAX_DENOMINATOR", 10**3)

# Height bound for parameter sweeps (type 2 sides, conic slopes t)
DEFAULT_MAX_PARAM = get_env_int("THETACONG_MAX_PARAM", 10**4)


# ==================== Torsion ====================

# Points not killed by this multiple are treated as having infinite order
TORSION_ORDER_BOUND = get_env_int("THETACONG_TORSION_BOUND", 18)


# ==================== Parallel Execution ====================

# Default number of joblib workers for point searches
DEFAULT_N_JOBS = get_env_int("THETACONG_N_JOBS", 1)

# Width of one height band handed to a worker
BAND_WIDTH = get_env_int("THETACONG_BAND_WIDTH", 256)


# ==================== Logging ====================

LOG_LEVEL = os.environ.get("THETACONG_LOG_LEVEL", "INFO")

# Emit a warning whenever a worked-example misprint is detected while checking fixtures
WARN_ON_MISPRINTS = get_env_bool("THETACONG_WARN_ON_MISPRINTS", True)


# ==================== Fixtures ====================

BUNDLED_FIXTURES = Path(__file__).parent / "data" / "fixtures.json"


@dataclass
class SearchBudget:
    """Bounds for every search in the package.

    Attributes:
        max_numerator: Largest |p| for candidates x = p/e^2.
        max_denominator: Largest e for candidates x = p/e^2, and largest
            denominator for conic base points.
        max_param: Largest height of swept parameters.
    """

    max_numerator: int = DEFAULT_MAX_NUMERATOR
    max_denominator: int = DEFAULT_MAX_DENOMINATOR
    max_param: int = DEFAULT_MAX_PARAM

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ThetaCongDomainError(
                    f"SearchBudget.{f.name} must be a positive integer, got {value!r}"
                )

    @property
    def max_height(self) -> int:
        """Largest naive height max(|p|, e^2) reachable under this budget."""
        return max(self.max_numerator, self.max_denominator**2)

    def to_json(self) -> dict:
        return {
            "maxNumerator": self.max_numerator,
            "maxDenominator": self.max_denominator,
            "maxParam": self.max_param,
        }


def load_budget(
    path: Optional[str | Path] = None, overrides: Iterable[str] = ()
) -> SearchBudget:
    """
    Builds a SearchBudget from defaults, an optional YAML file and dot-list overrides.

    Args:
        path: YAML file with any of max_numerator, max_denominator, max_param.
        overrides: Items like "max_param=50", applied last.

    Returns:
        SearchBudget: The merged, validated budget.
    """
    cfg = OmegaConf.structured(SearchBudget)
    try:
        if path is not None:
            logger.debug(f"Loading search budget from {path}")
            cfg = OmegaConf.merge(cfg, OmegaConf.load(path))
        overrides = list(overrides)
        if overrides:
            cfg = OmegaConf.merge(cfg, OmegaConf.from_dotlist(overrides))
        budget = OmegaConf.to_object(cfg)
    except ThetaCongDomainError:
        raise
    except Exception as e:
        raise ThetaCongDomainError(f"Invalid search budget configuration: {e}") from e
    return budget
