"""Per-invocation run configuration.

Values come from three layers, highest first: CLI flags, an optional
``key = value`` file given with ``--config`` and the model defaults below.
The file is read with ``dotenv_values``, so comments, quoting and ``export``
prefixes behave as they do in ``.env`` files.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Literal

from dotenv import dotenv_values
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveInt,
    ValidationError,
    field_validator,
    model_validator,
)

from ..errors import InvalidInputError
from ..norms import FunctionSpace, parse_space
from .settings import LOG_LEVELS

logger = logging.getLogger(__name__)

OutputFormat = Literal["json", "csv", "text"]


class RunConfig(BaseModel):
    """Validated settings for one CLI run.

    ``n`` and ``trials`` left unset fall back to each theorem's own default, and
    unset ``alpha`` / ``beta`` select each checker's default exponent.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: PositiveInt | None = None
    space: str = "lp:2"
    theorems: list[str] = Field(default_factory=list)
    trials: NonNegativeInt | None = None
    seed: int = 0
    alpha: float | None = None
    beta: float | None = None
    theta0: float = 1.0
    c: float | None = Field(default=None, gt=0)
    tol: float | None = Field(default=None, ge=0)
    format: OutputFormat = "json"
    out: Path | None = None
    workers: PositiveInt | None = None
    log_level: str | None = None
    n_max: PositiveInt = 12
    p: float = Field(default=2.0, ge=1)
    j_samples: PositiveInt = 4
    t_grid: list[float] | None = None
    budget: PositiveInt = 2000
    objective: str = "poincare"

    @field_validator("theorems", "t_grid", mode="before")
    @classmethod
    def _split_lists(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [token.strip() for token in value.split(",") if token.strip()]
        return value

    @field_validator("space")
    @classmethod
    def _check_space(cls, value: str) -> str:
        parse_space(value)
        return value

    @field_validator("log_level")
    @classmethod
    def _check_log_level(cls, value: str | None) -> str | None:
        if value is None:
            return None
        level = value.strip().upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"expected one of {', '.join(sorted(LOG_LEVELS))}, got {value!r}")
        return level

    @model_validator(mode="after")
    def _check_theorems(self) -> RunConfig:
        from ..checks.registry import THEOREM_REGISTRY

        unknown = [t for t in self.theorems if t not in THEOREM_REGISTRY]
        if unknown:
            raise ValueError(f"unknown theorem id(s): {', '.join(unknown)}")
        if self.n is not None:
            for theorem in self.theorems:
                cap = THEOREM_REGISTRY[theorem].max_n
                if self.n > cap:
                    raise ValueError(f"n = {self.n} exceeds the cap {cap} of `{theorem}`")
        return self

    @property
    def function_space(self) -> FunctionSpace:
        return parse_space(self.space)


def _describe(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        where = ".".join(str(loc) for loc in error["loc"]) or "config"
        parts.append(f"`{where}`: {error['msg']}")
    return "; ".join(parts)


def build_config(values: Mapping[str, Any]) -> RunConfig:
    """Validate ``values`` into a RunConfig, reporting failures as InvalidInputError."""
    try:
        return RunConfig.model_validate(dict(values))
    except ValidationError as exc:
        raise InvalidInputError(f"invalid run configuration: {_describe(exc)}") from exc


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Read a ``key = value`` file; keys are RunConfig field names (dashes allowed)."""
    path = Path(path)
    if not path.is_file():
        raise InvalidInputError(f"config file `{path}` does not exist.")
    raw = dotenv_values(path)
    values: dict[str, Any] = {}
    for key, value in raw.items():
        name = key.strip().lower().replace("-", "_")
        if name not in RunConfig.model_fields:
            raise InvalidInputError(f"unknown key `{key}` in config file `{path}`.")
        if value is None:
            raise InvalidInputError(f"key `{key}` in config file `{path}` has no value.")
        values[name] = value
    logger.debug("loaded %d setting(s) from %s", len(values), path)
    return values


def merge_sources(
    flags: Mapping[str, Any], config_path: str | Path | None = None
) -> RunConfig:
    """Flags over the config file over defaults; ``None`` flags count as unset."""
    values: dict[str, Any] = {}
    if config_path is not None:
        values.update(load_config_file(config_path))
    values.update({key: value for key, value in flags.items() if value is not None})
    return build_config(values)


__all__ = [
    "OutputFormat",
    "RunConfig",
    "build_config",
    "load_config_file",
    "merge_sources",
]
