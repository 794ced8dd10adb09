"""Checkers for the inequalities on the discrete cube Ω_n.

Each checker runs the deterministic corpus first and then ``trials`` random
functions, records LHS / RHS-without-constant for every instance and returns a
:class:`~poincare_cube.checks.report.Report`.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from typing import Any

import numpy as np
from scipy import special

from ..config.defaults import DEFAULTS, LIMITS, UNIVERSAL_CONSTANT_C
from ..cube import (
    CubeFunction,
    gradient_length,
    laplacian,
    partial_gradient_length,
    project_coordinates,
    riesz_product,
    subset_mask,
)
from ..errors import InvalidInputError, UnsupportedSpaceError
from ..norms import FunctionSpace, dual_space, function_norm, luxemburg_norm
from ..spectral import (
    HALF_PI,
    apply_multiplier,
    constant_K_alpha,
    constant_k_beta,
    convolution_multiplier,
    cosine_semigroup,
    fractional_laplacian,
    neg_log_cos,
)
from .common import (
    DEFAULT_T_GRID,
    EXPONENT_CAP,
    QUARTER_PI,
    SpaceConstant,
    check_size,
    check_t_grid,
    check_trials,
    exp_moment,
    finish_report,
    resolve_tol,
    space_params,
    tail_ratio,
    with_notes,
)
from .corpus import (
    SUBSET_STREAM,
    cube_corpus,
    describe_function,
    hamming_weight,
    stream_rng,
    trial_function,
)
from .decomposition import best_cube_decomposition
from .report import MAIN_COMPONENT, RatioTotals, Report
from .runner import Observation, TrialPlan, run_plan

logger = logging.getLogger(__name__)

APPENDIX_MAX_N = 10
LAMBDA_GRID = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
EXPONENTIAL_COEFFICIENT = math.pi**2 / 32.0
TAIL_COEFFICIENT = 8.0 / math.pi**2
SLOPE_GAP = 0.1


def _plan(
    n: int,
    trials: int,
    seed: int,
    *,
    real: bool = False,
    corpus: Sequence[tuple[str, Any]] | None = None,
) -> TrialPlan[CubeFunction]:
    return TrialPlan(
        corpus=cube_corpus(n) if corpus is None else corpus,
        trials=trials,
        make_trial=lambda i: trial_function(seed, i, n, real=real),
    )


def check_poincare(
    n: int,
    sp: FunctionSpace,
    trials: int = 200,
    seed: int = 0,
    *,
    c: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """‖f − Ef‖_E ≤ (π/4)K_E‖|∇f|‖_E."""
    n = check_size(n, LIMITS.cube_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    k_e = SpaceConstant.of(sp, c)
    totals = with_notes(RatioTotals(bound_constant=QUARTER_PI * k_e.value), k_e.notes)
    logger.info("checking poincare (n=%d, %s, %d trials)", n, sp, trials)

    def evaluate(label: str, f: CubeFunction) -> list[Observation]:
        lhs = function_norm(f - f.mean(), sp)
        rhs = function_norm(gradient_length(f), sp)
        return [Observation(lhs, rhs, label, witness=lambda: describe_function(f))]

    run_plan(totals, _plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, **space_params(sp, c), "trials": trials}
    return finish_report(
        "poincare", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


def check_semigroup_difference(
    n: int,
    sp: FunctionSpace,
    theta0: float = 1.0,
    trials: int = 200,
    seed: int = 0,
    *,
    c: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """‖f − cos^N θ₀(f)‖_E ≤ ½θ₀K_E‖|∇f|‖_E for 0 ≤ θ₀ ≤ π/2."""
    if not 0.0 <= theta0 <= HALF_PI:
        raise InvalidInputError(f"`theta0` must be in [0, π/2], got {theta0!r}.")
    if theta0 == HALF_PI:
        report = check_poincare(
            n, sp, trials, seed, c=c, tol=tol, workers=workers, emit_witness=emit_witness
        )
        return report.model_copy(
            update={
                "theorem_id": "semigroup",
                "params": {**report.params, "theta0": theta0},
                "notes": [*report.notes, "θ₀ = π/2: cos^N θ₀(f) = Ef, same as poincare"],
            }
        )
    n = check_size(n, LIMITS.cube_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    k_e = SpaceConstant.of(sp, c)
    totals = with_notes(RatioTotals(bound_constant=0.5 * theta0 * k_e.value), k_e.notes)
    logger.info("checking semigroup (n=%d, %s, θ₀=%g, %d trials)", n, sp, theta0, trials)

    def evaluate(label: str, f: CubeFunction) -> list[Observation]:
        lhs = function_norm(f - cosine_semigroup(f, theta0), sp)
        rhs = function_norm(gradient_length(f), sp)
        return [Observation(lhs, rhs, label, witness=lambda: describe_function(f))]

    run_plan(totals, _plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, **space_params(sp, c), "theta0": theta0, "trials": trials}
    return finish_report(
        "semigroup", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


def check_fractional(
    n: int,
    sp: FunctionSpace,
    alpha: float = 0.25,
    trials: int = 200,
    seed: int = 0,
    *,
    c: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """‖Δ^α f‖_E ≤ K_αK_E‖|∇f|‖_E for 0 < α < ½; α = ½ only records ratios."""
    if not 0.0 < alpha <= 0.5:
        raise InvalidInputError(f"`alpha` must be in (0, ½], got {alpha!r}.")
    n = check_size(n, LIMITS.cube_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    informational = alpha == 0.5
    if informational:
        totals = RatioTotals(bound_constant=None)
        totals.note("α = ½: the constant H_E is not computed; empirical worst ratio only")
    else:
        k_e = SpaceConstant.of(sp, c)
        totals = with_notes(
            RatioTotals(bound_constant=constant_K_alpha(alpha) * k_e.value), k_e.notes
        )
    logger.info("checking fractional (n=%d, %s, α=%g, %d trials)", n, sp, alpha, trials)

    def evaluate(label: str, f: CubeFunction) -> list[Observation]:
        lhs = function_norm(fractional_laplacian(f, alpha), sp)
        rhs = function_norm(gradient_length(f), sp)
        return [Observation(lhs, rhs, label, witness=lambda: describe_function(f))]

    run_plan(totals, _plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, **space_params(sp, c), "alpha": alpha, "trials": trials}
    return finish_report(
        "fractional",
        totals,
        params=params,
        tol=tol,
        seed=seed,
        mode="informational" if informational else "inequality",
        emit_witness=emit_witness,
    )


def _sup_gradient(f: CubeFunction) -> float:
    return float(np.abs(gradient_length(f).values).max())


def _cap_scale(f: CubeFunction, lam: float, coefficient: float) -> CubeFunction:
    """λf / max|∇f|, shrunk so that coefficient·max|∇|² stays below the exponent cap."""
    top = _sup_gradient(f)
    if top == 0.0:
        return f
    lam = min(lam, math.sqrt(EXPONENT_CAP / coefficient))
    return f * (lam / top)


def check_exponential(
    n: int,
    trials: int = 200,
    seed: int = 0,
    *,
    alpha: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """E e^{|f−Ef|} ≤ 2E e^{(π²/32)|∇f|²}, exactly by enumeration over Ω_n.

    With ``alpha`` the component ``alpha`` also checks E e^{|Δ^α f|} ≤ 2E e^{½K_α²|∇f|²}.
    Inputs are real and rescaled to a λ grid so every exponent stays below 25.
    """
    n = check_size(n, LIMITS.cube_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    alpha_coefficient = None if alpha is None else 0.5 * constant_K_alpha(alpha) ** 2
    totals = RatioTotals(bound_constant=2.0)
    logger.info("checking exponential (n=%d, %d trials, α=%s)", n, trials, alpha)

    corpus = [
        (f"{label} ×{lam:g}", (f, lam)) for label, f in cube_corpus(n) for lam in LAMBDA_GRID
    ]

    def make_trial(i: int) -> tuple[str, tuple[CubeFunction, float]]:
        label, f = trial_function(seed, i, n, real=True)
        lam = LAMBDA_GRID[(i // 3) % len(LAMBDA_GRID)]
        return f"{label} ×{lam:g}", (f, lam)

    def evaluate(label: str, item: tuple[CubeFunction, float]) -> list[Observation]:
        f, lam = item
        g = _cap_scale(f, lam, EXPONENTIAL_COEFFICIENT)
        grad_sq = np.abs(gradient_length(g).values) ** 2
        lhs = exp_moment(np.abs((g - g.mean()).values))
        rhs = exp_moment(EXPONENTIAL_COEFFICIENT * grad_sq)
        out = [_finite_observation(lhs, rhs, label, g)]
        if alpha_coefficient is not None:
            h = _cap_scale(f, lam, alpha_coefficient)
            lhs_a = exp_moment(np.abs(fractional_laplacian(h, alpha).values))
            rhs_a = exp_moment(alpha_coefficient * np.abs(gradient_length(h).values) ** 2)
            out.append(_finite_observation(lhs_a, rhs_a, label, h, component="alpha", bound=2.0))
        return out

    plan = TrialPlan(corpus=corpus, trials=trials, make_trial=make_trial)
    run_plan(totals, plan, evaluate, tol=tol, workers=workers)
    params = {"n": n, "trials": trials, "alpha": alpha, "lambda_grid": list(LAMBDA_GRID)}
    return finish_report(
        "exponential", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


def _finite_observation(
    lhs: float,
    rhs: float,
    label: str,
    g: CubeFunction,
    *,
    component: str = MAIN_COMPONENT,
    bound: float | None = None,
) -> Observation:
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        return Observation(lhs, rhs, label, skip="exponential moment overflow")
    return Observation(
        lhs, rhs, label, witness=lambda: describe_function(g), component=component, bound=bound
    )


def check_concentration(
    n: int,
    trials: int = 200,
    seed: int = 0,
    t_grid: Iterable[float] | None = None,
    *,
    alpha: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """P{|f − Ef| > t} ≤ 2 exp(−8t²/(π²‖|∇f|‖²_∞)) at every t of the grid.

    Every input is normalized to ‖f − Ef‖_∞ = 1. The tail table of the normalized
    Hamming weight Σω_j/n is attached to the report. With ``alpha`` the component
    ``alpha`` checks P{|Δ^α f| > t} ≤ 2 exp(−t²/(2K_α²‖|∇f|‖²_∞)).
    """
    n = check_size(n, LIMITS.cube_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    grid = check_t_grid(t_grid)
    alpha_coefficient = None if alpha is None else 1.0 / (2.0 * constant_K_alpha(alpha) ** 2)
    totals = RatioTotals(bound_constant=2.0)
    logger.info("checking concentration (n=%d, %d trials, %d grid points)", n, trials, len(grid))

    hamming = hamming_weight(n)
    deviation = np.abs((hamming - hamming.mean()).values)
    sup_grad = _sup_gradient(hamming)
    totals.add_rows(
        {
            "n": n,
            "t": t,
            "tail": float(np.mean(deviation > t)),
            "bound": 2.0 * math.exp(-TAIL_COEFFICIENT * t * t / sup_grad**2),
        }
        for t in grid
    )

    def evaluate(label: str, f: CubeFunction) -> list[Observation]:
        centered = f - f.mean()
        sup = float(np.abs(centered.values).max())
        if sup <= DEFAULTS.tolerances.exact:
            return [Observation(0.0, 0.0, label, skip="constant function has no tail")]
        g = centered / sup
        dev = np.abs(g.values)
        top = _sup_gradient(g)
        out = []
        for t in grid:
            ratio = tail_ratio(dev, t, top, TAIL_COEFFICIENT)
            out.append(
                Observation(ratio, 1.0, f"{label} t={t:g}", witness=_tail_witness(g, t))
            )
        if alpha_coefficient is not None:
            dev_alpha = np.abs(fractional_laplacian(g, alpha).values)
            for t in grid:
                ratio = tail_ratio(dev_alpha, t, top, alpha_coefficient)
                out.append(
                    Observation(
                        ratio,
                        1.0,
                        f"{label} t={t:g}",
                        witness=_tail_witness(g, t),
                        component="alpha",
                        bound=2.0,
                    )
                )
        return out

    run_plan(totals, _plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, "trials": trials, "t_grid": list(grid), "alpha": alpha}
    return finish_report(
        "concentration", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


def _tail_witness(g: CubeFunction, t: float) -> Callable[[], dict[str, Any]]:
    return lambda: {"t": t, **describe_function(g)}


def _check_beta(beta: float) -> bool:
    """True when β = ½, where only empirical ratios are recorded."""
    if not beta >= 0.5 or not math.isfinite(beta):
        raise InvalidInputError(f"`beta` must be at least ½, got {beta!r}.")
    return beta == 0.5


def check_reverse_convex(
    n: int,
    sp: FunctionSpace,
    beta: float = 0.75,
    trials: int = 200,
    seed: int = 0,
    *,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """‖|∇f|‖_E ≤ k_β‖Δ^β f‖_E on a 2-convex E.

    The component ``reduction`` checks the sharper (2/4^β)k_β that the same
    argument gives for mean-zero f.
    """
    if not sp.two_convex:
        raise UnsupportedSpaceError(f"{sp} is not 2-convex; use the reverse-concave check.")
    informational = _check_beta(beta)
    n = check_size(n, LIMITS.cube_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    k_beta = None if informational else constant_k_beta(beta)
    totals = RatioTotals(bound_constant=k_beta)
    if informational:
        totals.note("β = ½: the UMD constant is not computed; empirical worst ratio only")
    logger.info("checking reverse-convex (n=%d, %s, β=%g, %d trials)", n, sp, beta, trials)

    def evaluate(label: str, f: CubeFunction) -> list[Observation]:
        lhs = function_norm(gradient_length(f), sp)
        rhs = function_norm(fractional_laplacian(f, beta), sp)
        out = [Observation(lhs, rhs, label, witness=lambda: describe_function(f))]
        if k_beta is not None:
            out.append(
                Observation(
                    lhs,
                    rhs,
                    label,
                    witness=lambda: describe_function(f),
                    component="reduction",
                    bound=2.0 * k_beta / 4.0**beta,
                )
            )
        return out

    run_plan(totals, _plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, "space": sp.descriptor, "beta": beta, "trials": trials}
    return finish_report(
        "reverse-convex",
        totals,
        params=params,
        tol=tol,
        seed=seed,
        mode="informational" if informational else "inequality",
        emit_witness=emit_witness,
    )


def _check_concave_space(sp: FunctionSpace) -> None:
    if sp.kind != "lp" or not 1.0 < sp.p <= 2.0:
        raise UnsupportedSpaceError(
            f"the decomposition bound needs L^p with 1 < p ≤ 2, got {sp}."
        )


def check_reverse_concave(
    n: int,
    sp: FunctionSpace,
    beta: float = 1.0,
    trials: int = 50,
    seed: int = 0,
    *,
    c: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
    max_iterations: int | None = None,
) -> Report:
    """The decomposition bound for 1 < p ≤ 2:

        inf_{∂_j f = g_j + h_j} ‖(Σ|g_j|²)^½‖_p + ‖(Σ|h_j∗δ_{e_j}|²)^½‖_p ≤ k_βK_{E*}²‖Δ^β f‖_p

    The infimum is only bounded from above (trivial splits and a descent), so a
    candidate above the constant makes the report inconclusive, never failing.
    """
    _check_concave_space(sp)
    informational = _check_beta(beta)
    n = check_size(n, LIMITS.cube_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    iterations = DEFAULTS.decomposition.max_iterations if max_iterations is None else max_iterations
    if informational:
        totals = RatioTotals(bound_constant=None)
        totals.note("β = ½: the UMD constant is not computed; empirical worst ratio only")
    else:
        k_dual = SpaceConstant.of(dual_space(sp), c)
        totals = with_notes(
            RatioTotals(bound_constant=constant_k_beta(beta) * k_dual.value**2), k_dual.notes
        )
    logger.info("checking reverse-concave (n=%d, %s, β=%g, %d trials)", n, sp, beta, trials)

    def evaluate(label: str, f: CubeFunction) -> list[Observation]:
        result = best_cube_decomposition(f, sp, max_iterations=iterations)
        rhs = function_norm(fractional_laplacian(f, beta), sp)
        note = None
        if not result.converged:
            note = "decomposition descent did not converge on some inputs; best split found kept"
        return [
            Observation(
                result.value,
                rhs,
                label,
                witness=lambda: {
                    "trivial": result.trivial,
                    "descent": result.descent,
                    **describe_function(f),
                },
                note=note,
            )
        ]

    run_plan(
        totals,
        _plan(n, trials, seed),
        evaluate,
        tol=tol,
        workers=workers,
        abort_on_corpus_failure=False,
    )
    params = {"n": n, **space_params(sp, c), "beta": beta, "trials": trials}
    return finish_report(
        "reverse-concave",
        totals,
        params=params,
        tol=tol,
        seed=seed,
        mode="informational" if informational else "upper-bound",
        emit_witness=emit_witness,
    )


def _fitted_slope(ns: Sequence[int], ratios: Sequence[float]) -> float | None:
    if len(ns) < 2:
        return None
    slope, _ = np.polyfit(np.log(ns), np.log(ratios), 1)
    return float(slope)


def check_riesz_growth(
    n_max: int,
    p: float,
    beta: float = 1.0,
    *,
    tol: float | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """Growth of r(n, β) = ‖|∇f_n|‖_p / ‖Δ^β f_n‖_p along the Riesz products f_n.

    For every n ≤ n_max three exact inequalities are checked, each normalized to
    constant 1: ``upper`` ‖Δf_n‖_p ≤ 2^{1+1/p}n‖f_n‖_p, ``lower``
    n^{1/p}‖f_n‖_p ≤ ‖|∇f_n|‖_p and ``growth`` r(n, β) ≥ n^{1/p−β}/(4·2^{(1+1/p)β}).
    The fitted log-log slope of r over the upper half of the range is reported
    next to max(1/p − β, 0) but does not decide the status.
    """
    n_max = check_size(n_max, LIMITS.cube_max_n, "n_max")
    if not 1.0 <= p < math.inf:
        raise InvalidInputError(f"`p` must be a finite exponent ≥ 1, got {p!r}.")
    if not 0.0 < beta <= 1.0:
        raise InvalidInputError(f"`beta` must be in (0, 1], got {beta!r}.")
    tol = resolve_tol(tol)
    sp = FunctionSpace.lp(p)
    upper_constant = 2.0 ** (1.0 + 1.0 / p)
    growth_constant = 4.0 * 2.0 ** ((1.0 + 1.0 / p) * beta)
    totals = RatioTotals(bound_constant=1.0)
    rows = []
    logger.info("checking riesz growth (n ≤ %d, p=%g, β=%g)", n_max, p, beta)
    for n in range(1, n_max + 1):
        f = riesz_product(n)
        norm = function_norm(f, sp)
        lap = function_norm(laplacian(f), sp)
        grad = function_norm(gradient_length(f), sp)
        frac = function_norm(fractional_laplacian(f, beta), sp)
        r = grad / frac
        lower = n ** (1.0 / p - beta) / growth_constant
        label = f"f_{n}"
        witness = {"n": n}
        for component, lhs, rhs in (
            ("upper", lap, upper_constant * n * norm),
            ("lower", n ** (1.0 / p) * norm, grad),
            ("growth", lower, r),
        ):
            totals.observe(
                lhs, rhs, label=label, witness=lambda w=witness: w, component=component, bound=1.0
            )
        rows.append(
            {
                "n": n,
                "norm": norm,
                "laplacian_ratio": lap / (n * norm),
                "upper_constant": upper_constant,
                "gradient_ratio": grad / (n ** (1.0 / p) * norm),
                "r": r,
                "r_lower_bound": lower,
            }
        )
    totals.add_rows(rows)
    fit = [row for row in rows if row["n"] >= max(2, n_max // 2)]
    slope = _fitted_slope([row["n"] for row in fit], [row["r"] for row in fit])
    reference = max(1.0 / p - beta, 0.0)
    totals.note("fitted slope is descriptive; the status uses the exact bounds only")
    if slope is not None and abs(slope - reference) > SLOPE_GAP:
        totals.note(
            f"fitted slope {slope:.4g} over n ∈ [{fit[0]['n']}, {n_max}] is "
            f"{abs(slope - reference):.3g} from the asymptotic slope {reference:.4g}; "
            "the range is still pre-asymptotic"
        )
    params = {
        "n_max": n_max,
        "p": p,
        "beta": beta,
        "fitted_slope": slope,
        "reference_slope": reference,
        "upper_constant": upper_constant,
    }
    return finish_report(
        "riesz", totals, params=params, tol=tol, seed=None, emit_witness=emit_witness
    )


def check_moment_inequality(
    n: int,
    sp: FunctionSpace,
    beta: float = 0.5,
    trials: int = 200,
    seed: int = 0,
    *,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """‖Δ^β f‖_E ≤ 4‖f‖_E^{1−β}‖Δf‖_E^β for 0 < β < 1."""
    if not 0.0 < beta < 1.0:
        raise InvalidInputError(f"`beta` must be in (0, 1), got {beta!r}.")
    n = check_size(n, LIMITS.cube_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    totals = RatioTotals(bound_constant=4.0)
    logger.info("checking moment (n=%d, %s, β=%g, %d trials)", n, sp, beta, trials)

    def evaluate(label: str, f: CubeFunction) -> list[Observation]:
        lhs = function_norm(fractional_laplacian(f, beta), sp)
        rhs = function_norm(f, sp) ** (1.0 - beta) * function_norm(laplacian(f), sp) ** beta
        return [Observation(lhs, rhs, label, witness=lambda: describe_function(f))]

    run_plan(totals, _plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, "space": sp.descriptor, "beta": beta, "trials": trials}
    return finish_report(
        "moment", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


def random_subsets(n: int, count: int, seed: int) -> list[tuple[int, ...]]:
    """``count`` coordinate sets, each coordinate kept with probability ½."""
    rng = stream_rng(seed, SUBSET_STREAM)
    out = []
    for _ in range(count):
        keep = rng.random(n) < 0.5
        out.append(tuple(int(j) + 1 for j in np.flatnonzero(keep)))
    return out


def check_appendix_partial(
    n: int,
    sp: FunctionSpace,
    j_samples: int = 4,
    trials: int = 200,
    seed: int = 0,
    *,
    subsets: Sequence[Iterable[int]] | None = None,
    c: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """‖V_J f‖_E ≤ (π/4)K_E‖|∇_J f|‖_E for sampled coordinate sets J.

    On L^p with p ≥ 2 the component ``corollary`` also checks
    ‖f‖_p ≤ C√p‖|∇_J f|‖_p + ‖P_{J̄} f‖_p with the configured C.
    """
    n = check_size(n, APPENDIX_MAX_N)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    if subsets is None:
        if isinstance(j_samples, bool) or not isinstance(j_samples, int) or j_samples < 1:
            raise InvalidInputError(f"`j_samples` must be a positive integer, got {j_samples!r}.")
        chosen = random_subsets(n, j_samples, seed)
    else:
        chosen = [tuple(sorted(set(J))) for J in subsets]
        for J in chosen:
            subset_mask(J, n)
    k_e = SpaceConstant.of(sp, c)
    totals = with_notes(RatioTotals(bound_constant=QUARTER_PI * k_e.value), k_e.notes)
    corollary = sp.kind == "lp" and sp.p >= 2.0
    c_value = UNIVERSAL_CONSTANT_C if c is None else c
    if corollary:
        totals.note(f"corollary conditional on C = {c_value:g}")
    logger.info("checking appendix (n=%d, %s, %d subsets, %d trials)", n, sp, len(chosen), trials)

    def evaluate(label: str, f: CubeFunction) -> list[Observation]:
        out = []
        for J in chosen:
            v, rest = project_coordinates(f, J)
            grad = function_norm(partial_gradient_length(f, J), sp)
            tag = f"{label} J={list(J)}"
            out.append(
                Observation(
                    function_norm(v, sp),
                    grad,
                    tag,
                    witness=lambda J=J: {"subset": list(J), **describe_function(f)},
                )
            )
            if corollary:
                out.append(
                    Observation(
                        function_norm(f, sp),
                        c_value * math.sqrt(sp.p) * grad + function_norm(rest, sp),
                        tag,
                        witness=lambda J=J: {"subset": list(J), **describe_function(f)},
                        component="corollary",
                        bound=1.0,
                    )
                )
        return out

    run_plan(totals, _plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {
        "n": n,
        **space_params(sp, c),
        "subsets": [list(J) for J in chosen],
        "trials": trials,
    }
    return finish_report(
        "appendix", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


def check_log_sobolev(
    n: int,
    trials: int = 200,
    seed: int = 0,
    *,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """Empirical ‖f − Ef‖_{L^Φ} / ‖|∇f|‖_{L²} for Φ(x) = x² log(1 + x²)."""
    n = check_size(n, LIMITS.cube_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    l2 = FunctionSpace.lp(2.0)
    totals = RatioTotals(bound_constant=None)
    logger.info("checking log-sobolev (n=%d, %d trials)", n, trials)

    def evaluate(label: str, f: CubeFunction) -> list[Observation]:
        lhs = luxemburg_norm((f - f.mean()).values)
        rhs = function_norm(gradient_length(f), l2)
        return [Observation(lhs, rhs, label, witness=lambda: describe_function(f))]

    run_plan(totals, _plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    return finish_report(
        "log-sobolev",
        totals,
        params={"n": n, "trials": trials},
        tol=tol,
        seed=seed,
        mode="informational",
        emit_witness=emit_witness,
    )


def check_convolution(
    n: int,
    sp: FunctionSpace,
    theta0: float = 1.0,
    alpha: float = 0.25,
    trials: int = 200,
    seed: int = 0,
    *,
    c: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """‖∫φ(θ) d/dθ cos^N θ(f) dθ‖_E ≤ ½K_E‖φ‖_{L¹}‖|∇f|‖_E.

    Two kernels are checked as components: ``indicator`` φ = 1_{[0, θ₀]} and
    ``log-cos`` φ = (−log cos θ)^{−α}, whose L¹ norm is Γ(1−α)K_α.
    """
    if not 0.0 < theta0 <= HALF_PI:
        raise InvalidInputError(f"`theta0` must be in (0, π/2], got {theta0!r}.")
    if not 0.0 < alpha < 0.5:
        raise InvalidInputError(f"`alpha` must be in (0, ½), got {alpha!r}.")
    n = check_size(n, LIMITS.cube_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    k_e = SpaceConstant.of(sp, c)
    bound = 0.5 * k_e.value
    totals = with_notes(RatioTotals(bound_constant=bound), k_e.notes)
    quad_tol = DEFAULTS.quadrature.constant_tol
    kernels = [
        (
            "indicator",
            convolution_multiplier(np.ones_like, n, quad_tol, upper=theta0),
            theta0,
        ),
        (
            "log-cos",
            convolution_multiplier(
                lambda theta: neg_log_cos(theta) ** (-alpha),
                n,
                quad_tol,
                left_order=max(0.0, 2 * alpha - 1),
            ),
            float(special.gamma(1.0 - alpha)) * constant_K_alpha(alpha),
        ),
    ]
    logger.info("checking convolution (n=%d, %s, θ₀=%g, α=%g)", n, sp, theta0, alpha)

    def evaluate(label: str, f: CubeFunction) -> list[Observation]:
        grad = function_norm(gradient_length(f), sp)
        return [
            Observation(
                function_norm(apply_multiplier(f, multiplier), sp),
                l1_norm * grad,
                label,
                witness=lambda: describe_function(f),
                component=name,
                bound=bound,
            )
            for name, multiplier, l1_norm in kernels
        ]

    run_plan(totals, _plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, **space_params(sp, c), "theta0": theta0, "alpha": alpha, "trials": trials}
    return finish_report(
        "convolution", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


__all__ = [
    "APPENDIX_MAX_N",
    "DEFAULT_T_GRID",
    "check_appendix_partial",
    "check_concentration",
    "check_convolution",
    "check_exponential",
    "check_fractional",
    "check_log_sobolev",
    "check_moment_inequality",
    "check_poincare",
    "check_reverse_concave",
    "check_reverse_convex",
    "check_riesz_growth",
    "check_semigroup_difference",
    "random_subsets",
]
