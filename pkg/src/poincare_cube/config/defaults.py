"""Load numerical defaults (tolerances, caps, budgets) from defaults.yaml.

The YAML file ships with the package so defaults are always available. Set the
``POINCARE_DEFAULTS_PATH`` environment variable to point at a different YAML
file for runtime overrides; keys missing from the override fall back to the
model defaults below.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt


class Tolerances(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    exact: PositiveFloat = 1e-12
    quadrature: PositiveFloat = 1e-7
    inequality: PositiveFloat = 1e-9


class Limits(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    cube_max_n: int = Field(default=12, ge=1, le=24)
    dense_max_n: int = Field(default=6, ge=1, le=8)
    pauli_max_n: int = Field(default=8, ge=1, le=32)
    pauli_max_terms: PositiveInt = 65536


class QuadratureSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    constant_tol: PositiveFloat = 1e-11
    max_level: int = Field(default=10, ge=3, le=16)
    t_max: PositiveFloat = 4.5


class SearchSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    starts: PositiveInt = 6
    initial_step: PositiveFloat = 0.5
    min_step: PositiveFloat = 1e-4


class DecompositionSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iterations: PositiveInt = 500


class Defaults(BaseModel):
    """Validated contents of defaults.yaml."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tolerances: Tolerances = Field(default_factory=Tolerances)
    universal_constant_c: PositiveFloat = 1.0
    limits: Limits = Field(default_factory=Limits)
    quadrature: QuadratureSettings = Field(default_factory=QuadratureSettings)
    search: SearchSettings = Field(default_factory=SearchSettings)
    decomposition: DecompositionSettings = Field(default_factory=DecompositionSettings)


def _resolve_defaults_path() -> Path:
    override = os.getenv("POINCARE_DEFAULTS_PATH")
    if override:
        return Path(override)
    return Path(__file__).with_name("defaults.yaml")


def _load_raw() -> dict[str, Any]:
    path = _resolve_defaults_path()
    with path.open("r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise RuntimeError(f"{path} must contain a YAML mapping at the top level.")
    return data


DEFAULTS: Defaults = Defaults.model_validate(_load_raw())

TOLERANCES: Tolerances = DEFAULTS.tolerances
LIMITS: Limits = DEFAULTS.limits
UNIVERSAL_CONSTANT_C: float = DEFAULTS.universal_constant_c

__all__ = [
    "DEFAULTS",
    "LIMITS",
    "TOLERANCES",
    "UNIVERSAL_CONSTANT_C",
    "Defaults",
    "Limits",
    "Tolerances",
]
