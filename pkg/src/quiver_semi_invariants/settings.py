"""
Settings for quiver-semi-invariants.

Defaults come from config/defaults.yaml next to this module; QSI_CONFIG may
point to another YAML file whose sections are merged over the defaults.
"""

import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, Field, ValidationError, model_validator

from quiver_semi_invariants.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULTS_FILE = Path(__file__).parent / "config" / "defaults.yaml"
CONFIG_ENV_VAR = "QSI_CONFIG"


class SamplingSettings(BaseModel):
    """Generic-point sampling parameters."""

    entry_min: int = Field(default=-100, description="Smallest sampled matrix entry")
    entry_max: int = Field(default=100, description="Largest sampled matrix entry")
    samples: int = Field(default=5, ge=1, description="Independent draws per generic value")
    prime: int = Field(default=32003, description="Default modulus for prime-field sampling")
    min_prime: int = Field(default=32003, description="Smallest modulus accepted for sampling")
    fitting_trials: int = Field(default=6, ge=1, description="Trivial splits before giving up")
    isomorphism_trials: int = Field(default=10, ge=1, description="Random Hom combinations tried")

    @model_validator(mode="after")
    def _check_range(self) -> "SamplingSettings":
        if self.entry_min > self.entry_max:
            raise ValueError("entry_min must not exceed entry_max")
        return self


class CanonicalSettings(BaseModel):
    """Canonical decomposition parameters."""

    certification_retries: int = Field(default=5, ge=0)


class SiRingSettings(BaseModel):
    """Semi-invariant ring scan parameters."""

    box: int = Field(default=6, ge=1, description="Degree box for weight scans")
    jacobian_points: int = Field(default=3, ge=1)
    jacobian_coordinate_max: int = Field(default=1_000_000, ge=2)
    orbit_checks: int = Field(default=3, ge=0, description="Orbit points used by phi checks")


class ExampleSettings(BaseModel):
    """Sample sizes used by the built-in example verifiers."""

    ex1_pairs: int = Field(default=5, ge=1)
    ex2_brick_samples: int = Field(default=20, ge=1)
    ex3_lambda_samples: int = Field(default=10, ge=1)
    box: int = Field(default=3, ge=2)


class Settings(BaseModel):
    """All tunables, one section per concern."""

    sampling: SamplingSettings = Field(default_factory=SamplingSettings)
    canonical: CanonicalSettings = Field(default_factory=CanonicalSettings)
    si_ring: SiRingSettings = Field(default_factory=SiRingSettings)
    examples: ExampleSettings = Field(default_factory=ExampleSettings)


def _read_yaml(path: Path) -> dict[str, Any]:
    """Read a YAML mapping, raising ConfigError on any problem."""
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except FileNotFoundError as e:
        raise ConfigError(f"configuration file not found: {path}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse configuration file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"configuration file {path} must contain a mapping")
    return data


def _merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_settings(path: Path | None = None) -> Settings:
    """Load the packaged defaults, merged with `path` or $QSI_CONFIG when given."""
    data = _read_yaml(DEFAULTS_FILE)
    override = path or (Path(os.environ[CONFIG_ENV_VAR]) if os.getenv(CONFIG_ENV_VAR) else None)
    if override is not None:
        logger.info(f"Loading configuration override from {override}")
        data = _merge(data, _read_yaml(override))
    try:
        return Settings.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}") from e


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings, loaded once."""
    return load_settings()
