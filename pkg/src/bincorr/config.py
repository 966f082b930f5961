"""
Settings loader for bincorr.

Reads config/defaults.yaml (or the file named by BINCORR_CONFIG) once at
import time and validates it into a pydantic model. Modules read tolerances
from the module-level SETTINGS constant.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from bincorr.errors import ConfigError


_CONFIG_DIR = Path(__file__).parent / "config"
DEFAULT_CONFIG_PATH = _CONFIG_DIR / "defaults.yaml"
CONFIG_ENV_VAR = "BINCORR_CONFIG"


class Tolerances(BaseModel):
    hermitian: float = Field(gt=0)
    trace: float = Field(gt=0)
    psd: float = Field(gt=0)
    normalization: float = Field(gt=0)
    bloch_ball: float = Field(gt=0)
    bloch_bounds: float = Field(gt=0)
    imag_residue: float = Field(gt=0)
    rank_abs: float = Field(gt=0)
    zero_correlation: float = Field(gt=0)
    gram_min: float = Field(gt=0)
    schmidt: float = Field(gt=0)
    unit_bloch: float = Field(gt=0)
    purity: float = Field(gt=0)


class JacobiSettings(BaseModel):
    off_tol: float = Field(gt=0)
    max_sweeps: int = Field(ge=1)


class ProtocolSettings(BaseModel):
    """Default probe vectors for the three-measurement protocol."""

    y: tuple[float, float, float]
    xs: tuple[
        tuple[float, float, float],
        tuple[float, float, float],
        tuple[float, float, float],
    ]


class ShotSettings(BaseModel):
    shots: int = Field(ge=100)
    seed: int = Field(ge=0, lt=2**64)
    z_threshold: float = Field(gt=0)
    mode: Literal["joint", "independent"] = "joint"


class VerifySettings(BaseModel):
    trials: int
    min_trials: int = Field(ge=1)
    seed: int = Field(ge=0)

    @field_validator("trials")
    @classmethod
    def _trials_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("verify.trials must be positive")
        return v


class Settings(BaseModel):
    version: str
    tolerances: Tolerances
    jacobi: JacobiSettings
    protocol: ProtocolSettings
    shots: ShotSettings
    verify: VerifySettings


def load_settings(path: Path | str | None = None) -> Settings:
    """Load and validate a settings file.

    Args:
        path: YAML file to read. When None, BINCORR_CONFIG is consulted,
            then the packaged defaults.

    Raises:
        ConfigError: If the file is missing, is not a YAML mapping, or
            fails validation.
    """
    if path is None:
        path = os.getenv(CONFIG_ENV_VAR, "").strip() or DEFAULT_CONFIG_PATH
    path = Path(path)

    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"Cannot read settings file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"Malformed YAML in {path}: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"Invalid settings file: expected a top-level mapping. path={path}")

    try:
        return Settings.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid settings in {path}:\n{e}") from e


# Loaded once at import time.
SETTINGS = load_settings()
TOL = SETTINGS.tolerances
