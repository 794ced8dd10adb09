"""Argument validation, constants and report helpers shared by every checker."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..config import settings
from ..config.defaults import TOLERANCES
from ..errors import InvalidInputError
from ..norms import FunctionSpace, khintchine_constant, space_caveats
from .report import Mode, RatioTotals, Report

logger = logging.getLogger(__name__)

QUARTER_PI = 0.25 * math.pi
# e^25 ≈ 7.2e10 keeps the exponential moments below 1e12
EXPONENT_CAP = 25.0
DEFAULT_T_GRID = tuple(round(0.1 * k, 1) for k in range(1, 11))


def check_size(n: int, cap: int, what: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= cap:
        raise InvalidInputError(f"`{what}` must be an integer in [1, {cap}], got {n!r}.")
    return n


def check_trials(trials: int) -> int:
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 0:
        raise InvalidInputError(f"`trials` must be a nonnegative integer, got {trials!r}.")
    return trials


def check_t_grid(t_grid: Iterable[float] | None) -> tuple[float, ...]:
    grid = DEFAULT_T_GRID if t_grid is None else tuple(float(t) for t in t_grid)
    if not grid or any(not t > 0 for t in grid):
        raise InvalidInputError(
            f"`t_grid` must be a nonempty list of positive values, got {grid!r}."
        )
    return grid


def resolve_tol(tol: float | None) -> float:
    if tol is None:
        return TOLERANCES.inequality
    if not tol >= 0:
        raise InvalidInputError(f"`tol` must be nonnegative, got {tol!r}.")
    return float(tol)


def resolve_emit(emit_witness: bool | None) -> bool:
    return settings.ALWAYS_EMIT_WITNESS if emit_witness is None else emit_witness


@dataclass(frozen=True)
class SpaceConstant:
    """K_E for a space together with the caveats every report using it carries."""

    space: FunctionSpace
    value: float
    notes: tuple[str, ...]

    @classmethod
    def of(cls, sp: FunctionSpace, c: float | None) -> SpaceConstant:
        return cls(sp, khintchine_constant(sp, c), tuple(space_caveats(sp, c)))


def space_params(sp: FunctionSpace, c: float | None) -> dict[str, object]:
    params: dict[str, object] = {"space": sp.descriptor}
    if c is not None:
        params["C"] = c
    return params


def with_notes(totals: RatioTotals, notes: Iterable[str]) -> RatioTotals:
    for note in notes:
        totals.note(note)
    return totals


def exp_moment(values: np.ndarray) -> float:
    with np.errstate(over="ignore"):
        return float(np.mean(np.exp(values)))


def tail_ratio(deviation: np.ndarray, t: float, sup_grad: float, coefficient: float) -> float:
    """P{|X| > t} / exp(−coefficient·t²/G²), zero when the tail is empty."""
    tail = float(np.mean(deviation > t))
    if tail == 0.0:
        return 0.0
    if sup_grad == 0.0:
        return math.inf
    exponent = coefficient * t * t / sup_grad**2
    return math.inf if exponent > 700.0 else tail * math.exp(exponent)


def finish_report(
    theorem_id: str,
    totals: RatioTotals,
    *,
    params: dict[str, Any],
    tol: float,
    seed: int | None,
    mode: Mode = "inequality",
    emit_witness: bool | None = None,
) -> Report:
    report = totals.to_report(
        theorem_id,
        params=params,
        tol=tol,
        seed=seed,
        mode=mode,
        emit_witness=resolve_emit(emit_witness),
    )
    logger.info(
        "%s: %s over %d instances, worst ratio %.6g (bound %s)",
        theorem_id,
        report.status,
        report.instances,
        report.worst_ratio,
        report.bound_constant,
    )
    if report.status == "inconclusive":
        logger.warning("%s: upper bound on the infimum exceeds the constant", theorem_id)
    return report


__all__ = [
    "DEFAULT_T_GRID",
    "EXPONENT_CAP",
    "QUARTER_PI",
    "SpaceConstant",
    "check_size",
    "check_t_grid",
    "check_trials",
    "exp_moment",
    "finish_report",
    "resolve_emit",
    "resolve_tol",
    "space_params",
    "tail_ratio",
    "with_notes",
]
