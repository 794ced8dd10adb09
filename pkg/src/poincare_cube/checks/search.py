"""Best-effort search for large values of the cube ratio functionals.

The search climbs over real Walsh coefficient vectors: each start is normalized
to the unit sphere, single coefficients are nudged up and down, and the step is
halved after a sweep with no improvement. Every ratio is invariant under
f ↦ λf, so normalizing after each move loses nothing. The result is an observed
lower estimate of the sharp constant, never a certified maximum.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from ..config.defaults import DEFAULTS, LIMITS, TOLERANCES
from ..cube import CubeFunction, gradient_length, laplacian
from ..errors import InvalidInputError, UnsupportedSpaceError
from ..norms import FunctionSpace, function_norm, khintchine_constant, luxemburg_norm
from ..spectral import (
    HALF_PI,
    constant_K_alpha,
    constant_k_beta,
    cosine_semigroup,
    fractional_laplacian,
)
from .common import QUARTER_PI, check_size, resolve_tol
from .corpus import describe_function
from .report import Report, Status

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ObjectiveParams:
    alpha: float = 0.25
    beta: float = 0.75
    theta0: float = 1.0
    c: float | None = None


@dataclass(frozen=True)
class SearchObjective:
    """A ratio LHS / RHS over cube functions and the constant that bounds it."""

    id: str
    label: str
    sides: Callable[[CubeFunction, FunctionSpace, ObjectiveParams], tuple[float, float]]
    bound: Callable[[FunctionSpace, ObjectiveParams], float | None]


def _gradient_norm(f: CubeFunction, sp: FunctionSpace) -> float:
    return function_norm(gradient_length(f), sp)


def _poincare_sides(f: CubeFunction, sp: FunctionSpace, _: ObjectiveParams) -> tuple[float, float]:
    return function_norm(f - f.mean(), sp), _gradient_norm(f, sp)


def _semigroup_sides(f: CubeFunction, sp: FunctionSpace, q: ObjectiveParams) -> tuple[float, float]:
    return function_norm(f - cosine_semigroup(f, q.theta0), sp), _gradient_norm(f, sp)


def _fractional_sides(
    f: CubeFunction, sp: FunctionSpace, q: ObjectiveParams
) -> tuple[float, float]:
    return function_norm(fractional_laplacian(f, q.alpha), sp), _gradient_norm(f, sp)


def _reverse_sides(f: CubeFunction, sp: FunctionSpace, q: ObjectiveParams) -> tuple[float, float]:
    return _gradient_norm(f, sp), function_norm(fractional_laplacian(f, q.beta), sp)


def _moment_sides(f: CubeFunction, sp: FunctionSpace, q: ObjectiveParams) -> tuple[float, float]:
    rhs = function_norm(f, sp) ** (1.0 - q.beta) * function_norm(laplacian(f), sp) ** q.beta
    return function_norm(fractional_laplacian(f, q.beta), sp), rhs


def _log_sobolev_sides(
    f: CubeFunction, _: FunctionSpace, __: ObjectiveParams
) -> tuple[float, float]:
    return luxemburg_norm((f - f.mean()).values), _gradient_norm(f, FunctionSpace.lp(2.0))


def _khintchine(sp: FunctionSpace, q: ObjectiveParams) -> float:
    return khintchine_constant(sp, q.c)


OBJECTIVES: dict[str, SearchObjective] = {
    "poincare": SearchObjective(
        id="poincare",
        label="‖f − Ef‖_E / ‖|∇f|‖_E",
        sides=_poincare_sides,
        bound=lambda sp, q: QUARTER_PI * _khintchine(sp, q),
    ),
    "semigroup": SearchObjective(
        id="semigroup",
        label="‖f − cos^N θ₀ f‖_E / ‖|∇f|‖_E",
        sides=_semigroup_sides,
        bound=lambda sp, q: 0.5 * q.theta0 * _khintchine(sp, q),
    ),
    "fractional": SearchObjective(
        id="fractional",
        label="‖Δ^α f‖_E / ‖|∇f|‖_E",
        sides=_fractional_sides,
        bound=lambda sp, q: None
        if q.alpha == 0.5
        else constant_K_alpha(q.alpha) * _khintchine(sp, q),
    ),
    "reverse-convex": SearchObjective(
        id="reverse-convex",
        label="‖|∇f|‖_E / ‖Δ^β f‖_E",
        sides=_reverse_sides,
        bound=lambda sp, q: None if q.beta == 0.5 else constant_k_beta(q.beta),
    ),
    "moment": SearchObjective(
        id="moment",
        label="‖Δ^β f‖_E / ‖f‖_E^{1−β}‖Δf‖_E^β",
        sides=_moment_sides,
        bound=lambda sp, q: 4.0,
    ),
    "log-sobolev": SearchObjective(
        id="log-sobolev",
        label="‖f − Ef‖_{L^Φ} / ‖|∇f|‖_{L²}",
        sides=_log_sobolev_sides,
        bound=lambda sp, q: None,
    ),
}


@dataclass(frozen=True)
class SearchResult:
    objective: str
    n: int
    space: FunctionSpace
    best_ratio: float
    bound: float | None
    evaluations: int
    starts: int
    seed: int
    witness: dict[str, Any]
    params: ObjectiveParams

    def to_report(self, tol: float | None = None) -> Report:
        tol = resolve_tol(tol)
        passed: bool | None = None
        status: Status = "informational"
        if self.bound is not None:
            passed = self.best_ratio <= self.bound + tol
            status = "pass" if passed else "fail"
        return Report(
            theorem_id=f"search:{self.objective}",
            params={
                "n": self.n,
                "space": self.space.descriptor,
                "objective": self.objective,
                "starts": self.starts,
                "alpha": self.params.alpha,
                "beta": self.params.beta,
                "theta0": self.params.theta0,
            },
            instances=self.evaluations,
            worst_ratio=self.best_ratio,
            bound_constant=self.bound,
            status=status,
            passed=passed,
            tol=tol,
            witness=self.witness,
            notes=["best ratio found by local search; a lower estimate of the sharp constant"],
            seed=self.seed,
        )


def _check_params(objective: str, sp: FunctionSpace, q: ObjectiveParams) -> None:
    if objective == "reverse-convex" and not sp.two_convex:
        raise UnsupportedSpaceError(f"{sp} is not 2-convex.")
    if objective == "fractional" and not 0.0 < q.alpha <= 0.5:
        raise InvalidInputError(f"`alpha` must be in (0, ½], got {q.alpha!r}.")
    if objective == "reverse-convex" and not q.beta >= 0.5:
        raise InvalidInputError(f"`beta` must be at least ½, got {q.beta!r}.")
    if objective == "moment" and not 0.0 < q.beta < 1.0:
        raise InvalidInputError(f"`beta` must be in (0, 1), got {q.beta!r}.")
    if objective == "semigroup" and not 0.0 <= q.theta0 <= HALF_PI:
        raise InvalidInputError(f"`theta0` must be in [0, π/2], got {q.theta0!r}.")


def _unit(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    norm = float(np.linalg.norm(x))
    return x if norm == 0.0 else x / norm


def _start(n: int, seed: int, index: int) -> npt.NDArray[np.float64]:
    """Start 0 is the level-1 sum; the others are Gaussian."""
    if index == 0:
        x = np.zeros(1 << n)
        x[[1 << j for j in range(n)]] = 1.0
        return _unit(x)
    return _unit(np.random.default_rng([seed, index]).standard_normal(1 << n))


def extremal_search(
    n: int,
    sp: FunctionSpace,
    objective: str,
    budget: int = 2000,
    seed: int = 0,
    *,
    params: ObjectiveParams | None = None,
    starts: int | None = None,
) -> SearchResult:
    """Multi-start coordinate-perturbation ascent of a registered ratio functional.

    ``budget`` caps the total number of ratio evaluations, shared evenly across
    the starts. The run is deterministic for a fixed seed.
    """
    entry = OBJECTIVES.get(objective)
    if entry is None:
        known = ", ".join(OBJECTIVES)
        raise InvalidInputError(f"unknown objective `{objective}`; expected one of: {known}.")
    n = check_size(n, LIMITS.cube_max_n)
    if isinstance(budget, bool) or not isinstance(budget, int) or budget < 1:
        raise InvalidInputError(f"`budget` must be a positive integer, got {budget!r}.")
    q = ObjectiveParams() if params is None else params
    _check_params(objective, sp, q)
    starts = DEFAULTS.search.starts if starts is None else max(1, int(starts))
    bound = entry.bound(sp, q)
    per_start = max(1, budget // starts)
    logger.info(
        "searching %s (n=%d, %s, budget %d over %d starts)", objective, n, sp, budget, starts
    )

    evaluations = 0

    def ratio(x: npt.NDArray[np.float64]) -> float:
        nonlocal evaluations
        evaluations += 1
        lhs, rhs = entry.sides(CubeFunction(n, coeffs=x), sp, q)
        if rhs <= TOLERANCES.exact:
            return 0.0 if lhs <= TOLERANCES.exact else math.inf
        return lhs / rhs

    best_ratio = -math.inf
    best_x = _start(n, seed, 0)
    for s in range(starts):
        if evaluations >= budget:
            break
        limit = min(budget, evaluations + per_start)
        order_rng = np.random.default_rng([seed, s, 1])
        x = _start(n, seed, s)
        value = ratio(x)
        step = DEFAULTS.search.initial_step
        while step >= DEFAULTS.search.min_step and evaluations < limit:
            improved = False
            for k in order_rng.permutation(x.size):
                for sign in (1.0, -1.0):
                    if evaluations >= limit:
                        break
                    y = x.copy()
                    y[k] += sign * step
                    y = _unit(y)
                    candidate = ratio(y)
                    if candidate > value:
                        x, value, improved = y, candidate, True
                        break
                if evaluations >= limit:
                    break
            if not improved:
                step *= 0.5
        logger.debug("start %d of %s reached %.6g", s, objective, value)
        if value > best_ratio:
            best_ratio, best_x = value, x

    witness = describe_function(CubeFunction(n, coeffs=best_x))
    logger.info("%s: best ratio %.6g after %d evaluations", objective, best_ratio, evaluations)
    return SearchResult(
        objective=objective,
        n=n,
        space=sp,
        best_ratio=float(best_ratio),
        bound=bound,
        evaluations=evaluations,
        starts=starts,
        seed=seed,
        witness=witness,
        params=q,
    )


__all__ = ["OBJECTIVES", "ObjectiveParams", "SearchObjective", "SearchResult", "extremal_search"]
