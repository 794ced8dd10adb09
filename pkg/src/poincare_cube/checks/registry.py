"""Stable theorem ids and how each one is run from a :class:`RunConfig`."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

from ..config.defaults import LIMITS
from ..errors import InvalidInputError
from ..logging_setup import run_scope
from . import cube_checks, operator_checks
from .report import Report

if TYPE_CHECKING:
    from ..config.run import RunConfig

logger = logging.getLogger(__name__)

Family = Literal["cube", "operator"]


@dataclass(frozen=True)
class TheoremEntry:
    """Canonical metadata describing a checkable statement."""

    id: str
    label: str
    family: Family
    default_n: int
    max_n: int
    default_trials: int
    run: Callable[[RunConfig, int, int], Report]


def _or(value: float | None, default: float) -> float:
    return default if value is None else value


def _run_poincare(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_poincare(
        n, cfg.function_space, trials, cfg.seed, c=cfg.c, tol=cfg.tol, workers=cfg.workers
    )


def _run_semigroup(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_semigroup_difference(
        n,
        cfg.function_space,
        cfg.theta0,
        trials,
        cfg.seed,
        c=cfg.c,
        tol=cfg.tol,
        workers=cfg.workers,
    )


def _run_fractional(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_fractional(
        n,
        cfg.function_space,
        _or(cfg.alpha, 0.25),
        trials,
        cfg.seed,
        c=cfg.c,
        tol=cfg.tol,
        workers=cfg.workers,
    )


def _run_exponential(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_exponential(
        n, trials, cfg.seed, alpha=cfg.alpha, tol=cfg.tol, workers=cfg.workers
    )


def _run_concentration(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_concentration(
        n, trials, cfg.seed, cfg.t_grid, alpha=cfg.alpha, tol=cfg.tol, workers=cfg.workers
    )


def _run_reverse_convex(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_reverse_convex(
        n,
        cfg.function_space,
        _or(cfg.beta, 0.75),
        trials,
        cfg.seed,
        tol=cfg.tol,
        workers=cfg.workers,
    )


def _run_reverse_concave(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_reverse_concave(
        n,
        cfg.function_space,
        _or(cfg.beta, 1.0),
        trials,
        cfg.seed,
        c=cfg.c,
        tol=cfg.tol,
        workers=cfg.workers,
    )


def _run_riesz(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_riesz_growth(cfg.n_max, cfg.p, _or(cfg.beta, 1.0), tol=cfg.tol)


def _run_moment(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_moment_inequality(
        n,
        cfg.function_space,
        _or(cfg.beta, 0.5),
        trials,
        cfg.seed,
        tol=cfg.tol,
        workers=cfg.workers,
    )


def _run_appendix(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_appendix_partial(
        n,
        cfg.function_space,
        cfg.j_samples,
        trials,
        cfg.seed,
        c=cfg.c,
        tol=cfg.tol,
        workers=cfg.workers,
    )


def _run_log_sobolev(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_log_sobolev(n, trials, cfg.seed, tol=cfg.tol, workers=cfg.workers)


def _run_convolution(cfg: RunConfig, n: int, trials: int) -> Report:
    return cube_checks.check_convolution(
        n,
        cfg.function_space,
        cfg.theta0,
        _or(cfg.alpha, 0.25),
        trials,
        cfg.seed,
        c=cfg.c,
        tol=cfg.tol,
        workers=cfg.workers,
    )


def _run_lemma53(cfg: RunConfig, n: int, trials: int) -> Report:
    return operator_checks.check_lemma53(
        n, cfg.function_space, trials, cfg.seed, tol=cfg.tol, workers=cfg.workers
    )


def _run_car_lemma(cfg: RunConfig, n: int, trials: int) -> Report:
    return operator_checks.check_car_lemma(
        n, cfg.function_space, trials, cfg.seed, tol=cfg.tol, workers=cfg.workers
    )


def _run_car_main(cfg: RunConfig, n: int, trials: int) -> Report:
    return operator_checks.check_car_main(
        n,
        cfg.function_space,
        trials,
        cfg.seed,
        alpha=cfg.alpha,
        c=cfg.c,
        tol=cfg.tol,
        workers=cfg.workers,
    )


def _run_car_concentration(cfg: RunConfig, n: int, trials: int) -> Report:
    return operator_checks.check_car_concentration(
        n, trials, cfg.seed, cfg.t_grid, alpha=cfg.alpha, tol=cfg.tol, workers=cfg.workers
    )


def _run_car_reverse(cfg: RunConfig, n: int, trials: int) -> Report:
    return operator_checks.check_car_reverse(
        n,
        cfg.function_space,
        _or(cfg.beta, 0.75),
        trials,
        cfg.seed,
        c=cfg.c,
        tol=cfg.tol,
        workers=cfg.workers,
    )


def _run_derivation_khintchine(cfg: RunConfig, n: int, trials: int) -> Report:
    return operator_checks.check_derivation_khintchine(
        n, cfg.function_space, trials, cfg.seed, c=cfg.c, tol=cfg.tol, workers=cfg.workers
    )


def _run_projection_norm(cfg: RunConfig, n: int, trials: int) -> Report:
    return operator_checks.check_projection_norm(
        n, cfg.function_space, trials, cfg.seed, c=cfg.c, tol=cfg.tol, workers=cfg.workers
    )


_DENSE = LIMITS.dense_max_n
_PROJECTION = min(operator_checks.PROJECTION_MAX_N, LIMITS.dense_max_n)


THEOREM_REGISTRY: dict[str, TheoremEntry] = {
    entry.id: entry
    for entry in (
        TheoremEntry(
            "poincare",
            "Poincaré: ‖f − Ef‖_E ≤ (π/4)K_E‖|∇f|‖_E",
            "cube", 6, LIMITS.cube_max_n, 200, _run_poincare,
        ),
        TheoremEntry(
            "semigroup",
            "semigroup difference: ‖f − cos^N θ₀ f‖_E ≤ ½θ₀K_E‖|∇f|‖_E",
            "cube", 6, LIMITS.cube_max_n, 200, _run_semigroup,
        ),
        TheoremEntry(
            "fractional",
            "fractional Laplacian: ‖Δ^α f‖_E ≤ K_αK_E‖|∇f|‖_E",
            "cube", 6, LIMITS.cube_max_n, 200, _run_fractional,
        ),
        TheoremEntry(
            "exponential",
            "exponential integrability: E e^{|f−Ef|} ≤ 2E e^{(π²/32)|∇f|²}",
            "cube", 8, LIMITS.cube_max_n, 200, _run_exponential,
        ),
        TheoremEntry(
            "concentration",
            "concentration: P{|f−Ef| > t} ≤ 2exp(−8t²/(π²‖|∇f|‖²_∞))",
            "cube", 8, LIMITS.cube_max_n, 200, _run_concentration,
        ),
        TheoremEntry(
            "reverse-convex",
            "reverse inequality on 2-convex E: ‖|∇f|‖_E ≤ k_β‖Δ^β f‖_E",
            "cube", 6, LIMITS.cube_max_n, 200, _run_reverse_convex,
        ),
        TheoremEntry(
            "reverse-concave",
            "reverse inequality on L^p, 1 < p ≤ 2: decomposition infimum ≤ k_βK_{E*}²‖Δ^β f‖_p",
            "cube", 4, LIMITS.cube_max_n, 50, _run_reverse_concave,
        ),
        TheoremEntry(
            "riesz",
            "Riesz product growth: exact two-sided bounds for ‖Δf_n‖_p and ‖|∇f_n|‖_p",
            "cube", LIMITS.cube_max_n, LIMITS.cube_max_n, 0, _run_riesz,
        ),
        TheoremEntry(
            "moment",
            "moment inequality: ‖Δ^β f‖_E ≤ 4‖f‖_E^{1−β}‖Δf‖_E^β",
            "cube", 6, LIMITS.cube_max_n, 200, _run_moment,
        ),
        TheoremEntry(
            "appendix",
            "partial coordinates: ‖f − P_{J̄}f‖_E ≤ (π/4)K_E‖|∇_J f|‖_E",
            "cube", 6, cube_checks.APPENDIX_MAX_N, 200, _run_appendix,
        ),
        TheoremEntry(
            "log-sobolev",
            "Orlicz ratio ‖f − Ef‖_{L^Φ} / ‖|∇f|‖_{L²}, Φ(x) = x² log(1 + x²) (informational)",
            "cube", 6, LIMITS.cube_max_n, 200, _run_log_sobolev,
        ),
        TheoremEntry(
            "convolution",
            "semigroup convolution: ‖∫φ(θ) d/dθ cos^Nθ f dθ‖_E ≤ ½K_E‖φ‖_{L¹}‖|∇f|‖_E",
            "cube", 6, LIMITS.cube_max_n, 200, _run_convolution,
        ),
        TheoremEntry(
            "lemma53",
            "square function of S_j = P_jΠ_j(S): ‖(Σ|S_j|²)^½‖_{C_E} ≤ ‖S‖_{C_E}",
            "operator", 3, _PROJECTION, 100, _run_lemma53,
        ),
        TheoremEntry(
            "car-lemma",
            "fermionic square function of S_j = P′_jΠ′_j(S): ‖(Σ|S_j|²)^½‖_{C_E} ≤ ‖S‖_{C_E}",
            "operator", 3, _PROJECTION, 100, _run_car_lemma,
        ),
        TheoremEntry(
            "derivation-khintchine",
            "derivation bound: ‖𝓓(T)‖_{C_E} ≤ K_E‖(Σ|D_jT|²)^½‖_{C_E}",
            "operator", 4, _DENSE, 100, _run_derivation_khintchine,
        ),
        TheoremEntry(
            "projection-norm",
            "projection bound: ‖Σ_j Π_j(S)‖_{C_q} ≤ K_q‖S‖_{C_q}, q ≥ 2",
            "operator", 3, _PROJECTION, 100, _run_projection_norm,
        ),
        TheoremEntry(
            "car-main",
            "CAR Poincaré: ‖T − τ(T)‖_{C_E} ≤ (π/2)K_E‖|∇_sT|‖_{C_E}",
            "operator", 4, _DENSE, 200, _run_car_main,
        ),
        TheoremEntry(
            "car-concentration",
            "CAR exponential integrability and tails of |T − τ(T)|",
            "operator", 4, _DENSE, 100, _run_car_concentration,
        ),
        TheoremEntry(
            "car-reverse",
            "CAR reverse inequality: ‖|∇_sT|‖_{C_E} ≤ 2k_β‖N′^β T‖_{C_E}",
            "operator", 4, _DENSE, 100, _run_car_reverse,
        ),
    )
}


def get_entry(theorem_id: str) -> TheoremEntry:
    entry = THEOREM_REGISTRY.get(theorem_id)
    if entry is None:
        known = ", ".join(THEOREM_REGISTRY)
        raise InvalidInputError(f"unknown theorem id `{theorem_id}`; expected one of: {known}.")
    return entry


def run_theorem(theorem_id: str, cfg: RunConfig) -> Report:
    """Run one registered check with the settings in ``cfg`` under its own run-id scope."""
    entry = get_entry(theorem_id)
    n = entry.default_n if cfg.n is None else cfg.n
    if n > entry.max_n:
        raise InvalidInputError(f"`n` = {n} exceeds the cap {entry.max_n} of `{theorem_id}`.")
    trials = entry.default_trials if cfg.trials is None else cfg.trials
    with run_scope() as run_id:
        logger.debug("run %s: %s (n=%d, trials=%d)", run_id, theorem_id, n, trials)
        return entry.run(cfg, n, trials)


def theorem_help() -> str:
    """One line per registered id, used by ``--help``."""
    width = max(len(theorem_id) for theorem_id in THEOREM_REGISTRY)
    return "\n".join(
        f"  {entry.id:<{width}}  {entry.label}" for entry in THEOREM_REGISTRY.values()
    )


__all__ = [
    "THEOREM_REGISTRY",
    "Family",
    "TheoremEntry",
    "get_entry",
    "run_theorem",
    "theorem_help",
]
