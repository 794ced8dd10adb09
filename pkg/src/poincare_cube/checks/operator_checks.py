"""Checkers for the matrix-algebra and CAR-algebra inequalities.

All norms here are Schatten norms of dense 2^n × 2^n matrices, so every checker
is capped at ``LIMITS.dense_max_n`` sites (five for the projection lemmas).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from typing import Any

import numpy as np

from ..algebra.car import (
    CarElement,
    car_annihilation,
    car_components,
    car_identity,
    car_number,
    symmetrized_gradient,
)
from ..algebra.dense import from_dense, to_dense
from ..algebra.pauli import (
    PauliElement,
    derivation,
    embed_function,
    identity_element,
    p_b_q_a,
    pauli_d_operator,
    pauli_generator,
    pauli_mul,
    projection_pi,
    projection_pi_total,
)
from ..config.defaults import DEFAULTS, LIMITS, TOLERANCES
from ..errors import InvalidInputError, UnsupportedSpaceError
from ..norms import (
    FunctionSpace,
    dual_space,
    schatten_norm,
    singular_values,
    square_function,
)
from ..spectral import HALF_PI, constant_K_alpha, constant_k_beta
from .common import (
    EXPONENT_CAP,
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
    car_corpus,
    cube_corpus,
    describe_car,
    describe_function,
    describe_pauli,
    random_car_element,
    random_dense,
    trial_function,
    trial_rng,
)
from .decomposition import best_car_decomposition
from .report import Mode, RatioTotals, Report
from .runner import Observation, TrialPlan, run_plan

logger = logging.getLogger(__name__)

PROJECTION_MAX_N = 5
CAR_EXPONENTIAL_COEFFICIENT = math.pi**2 / 16.0
CAR_TAIL_COEFFICIENT = 4.0 / math.pi**2
LAMBDA_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)

Spectrum = Callable[[CarElement], np.ndarray]


def _self_adjoint(t: CarElement) -> CarElement:
    """Q′_A* = ±Q′_A, so a word is made Hermitian by a factor i when needed."""
    h = (t + t.adjoint()) * 0.5
    return t * 1j if np.allclose(h.alpha, 0.0) and not np.allclose(t.alpha, 0.0) else h


def _car_plan(n: int, trials: int, seed: int, *, hermitian: bool = False) -> TrialPlan[CarElement]:
    corpus = car_corpus(n)
    if hermitian:
        corpus = [(label, _self_adjoint(t)) for label, t in corpus]
    return TrialPlan(
        corpus=corpus,
        trials=trials,
        make_trial=lambda i: (
            f"random[{i}]",
            random_car_element(trial_rng(seed, i), n, hermitian=hermitian),
        ),
    )


def _matrix_plan(n: int, trials: int, seed: int) -> TrialPlan[PauliElement]:
    """Generic elements of M_{2^n}; the corpus holds the equality and vanishing cases."""
    corpus = [
        ("identity", identity_element(n)),
        ("P_1", pauli_generator("P", 1, n)),
        ("Q_1", pauli_generator("Q", 1, n)),
        ("P_{1..n}", p_b_q_a(range(1, n + 1), (), n)),
    ]
    if n >= 2:
        corpus.append(("P_1 Q_2", p_b_q_a([1], [2], n)))
        corpus.append(("P_1 + P_2", pauli_generator("P", 1, n) + pauli_generator("P", 2, n)))
    return TrialPlan(
        corpus=corpus,
        trials=trials,
        make_trial=lambda i: (f"random[{i}]", from_dense(random_dense(trial_rng(seed, i), n))),
    )


def _centered(t: CarElement) -> np.ndarray:
    return (t - car_identity(t.n) * t.trace()).to_dense()


def check_car_main(
    n: int,
    sp: FunctionSpace,
    trials: int = 200,
    seed: int = 0,
    *,
    alpha: float | None = None,
    c: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """‖T − τ_n(T)Id‖_{C_E} ≤ (π/2)K_E‖|∇_sT|‖_{C_E} on the CAR algebra.

    With ``alpha`` the component ``alpha`` checks ‖N′^α T‖_{C_E} ≤ K_αK_E‖|∇_sT|‖_{C_E}.
    """
    n = check_size(n, LIMITS.dense_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    k_e = SpaceConstant.of(sp, c)
    totals = with_notes(RatioTotals(bound_constant=HALF_PI * k_e.value), k_e.notes)
    alpha_bound = None if alpha is None else constant_K_alpha(alpha) * k_e.value
    logger.info("checking car-main (n=%d, %s, %d trials)", n, sp, trials)

    def evaluate(label: str, t: CarElement) -> list[Observation]:
        grad = schatten_norm(symmetrized_gradient(t), sp)
        out = [
            Observation(
                schatten_norm(_centered(t), sp), grad, label, witness=lambda: describe_car(t)
            )
        ]
        if alpha is not None:
            out.append(
                Observation(
                    schatten_norm(car_number(t, alpha).to_dense(), sp),
                    grad,
                    label,
                    witness=lambda: describe_car(t),
                    component="alpha",
                    bound=alpha_bound,
                )
            )
        return out

    run_plan(totals, _car_plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, **space_params(sp, c), "alpha": alpha, "trials": trials}
    return finish_report(
        "car-main", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


def check_car_concentration(
    n: int,
    trials: int = 100,
    seed: int = 0,
    t_grid: Iterable[float] | None = None,
    *,
    alpha: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """Exponential integrability and tails of |T − τ_n(T)Id| for Hermitian T ∈ M′_n.

    The main component checks ½τ_n(exp|T − τ_n(T)Id|) ≤ τ_n(exp((π²/16)|∇_sT|²)) on a
    λ grid; ``tail`` checks τ_n(1_{|T − τ_n(T)Id| > t}) ≤ 2exp(−4t²/(π²‖|∇_sT|‖²_∞))
    with T normalized to ‖T − τ_n(T)Id‖_∞ = 1. Both sides come from full
    eigendecompositions. With ``alpha`` the components ``alpha`` and ``alpha-tail``
    check the N′^α analogues with ½K_α² and 1/(2K_α²).
    """
    n = check_size(n, LIMITS.dense_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    grid = check_t_grid(t_grid)
    k_alpha = None if alpha is None else constant_K_alpha(alpha)
    totals = RatioTotals(bound_constant=2.0)
    totals.note("the exponential bound uses the coefficient π²/16 and the tail bound 4/π²")
    logger.info("checking car-concentration (n=%d, %d trials)", n, trials)

    def exponential(
        label: str, t: CarElement, coefficient: float, lhs_of: Spectrum, component: str
    ) -> list[Observation]:
        out: list[Observation] = []
        sup = float(singular_values(symmetrized_gradient(t)).max())
        for lam in LAMBDA_GRID:
            scale = 1.0 if sup == 0.0 else min(lam, math.sqrt(EXPONENT_CAP / coefficient)) / sup
            scaled = t * scale
            g = singular_values(symmetrized_gradient(scaled))
            lhs = exp_moment(lhs_of(scaled))
            rhs = exp_moment(coefficient * g**2)
            tag = f"{label} ×{lam:g}"
            if not (math.isfinite(lhs) and math.isfinite(rhs)):
                out.append(Observation(lhs, rhs, tag, skip="exponential moment overflow"))
                continue
            out.append(
                Observation(
                    lhs,
                    rhs,
                    tag,
                    witness=lambda s=scaled: describe_car(s),
                    component=component,
                    bound=2.0,
                )
            )
        return out

    def tails(
        label: str, t: CarElement, coefficient: float, lhs_of: Spectrum, component: str
    ) -> list[Observation]:
        sup_x = float(singular_values(_centered(t)).max())
        if sup_x <= TOLERANCES.exact:
            return [Observation(0.0, 0.0, label, skip="scalar operator has no tail")]
        u = t * (1.0 / sup_x)
        s = lhs_of(u)
        sup_grad = float(singular_values(symmetrized_gradient(u)).max())
        return [
            Observation(
                tail_ratio(s, x, sup_grad, coefficient),
                1.0,
                f"{label} t={x:g}",
                witness=lambda x=x: {"t": x, **describe_car(u)},
                component=component,
                bound=2.0,
            )
            for x in grid
        ]

    def centered_spectrum(t: CarElement) -> np.ndarray:
        return singular_values(_centered(t))

    def number_spectrum(t: CarElement) -> np.ndarray:
        return singular_values(car_number(t, alpha).to_dense())

    def evaluate(label: str, t: CarElement) -> list[Observation]:
        out = exponential(label, t, CAR_EXPONENTIAL_COEFFICIENT, centered_spectrum, "main")
        out += tails(label, t, CAR_TAIL_COEFFICIENT, centered_spectrum, "tail")
        if k_alpha is not None:
            out += exponential(label, t, 0.5 * k_alpha**2, number_spectrum, "alpha")
            out += tails(label, t, 1.0 / (2.0 * k_alpha**2), number_spectrum, "alpha-tail")
        return out

    plan = _car_plan(n, trials, seed, hermitian=True)
    run_plan(totals, plan, evaluate, tol=tol, workers=workers)
    params = {"n": n, "trials": trials, "t_grid": list(grid), "alpha": alpha}
    return finish_report(
        "car-concentration", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


def _square_functions(t: CarElement) -> tuple[np.ndarray, np.ndarray]:
    """(Σ|D′_jT|²)^½ and (Σ|D′_jT*|²)^½."""
    ds = [car_annihilation(t, j).to_dense() for j in range(1, t.n + 1)]
    return square_function(ds), square_function([d.conj().T for d in ds])


def check_car_reverse(
    n: int,
    sp: FunctionSpace,
    beta: float = 0.75,
    trials: int = 100,
    seed: int = 0,
    *,
    c: float | None = None,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
    max_iterations: int | None = None,
) -> Report:
    """Reverse inequalities on M′_n.

    On a 2-convex E: ‖|∇_sT|‖_{C_E} ≤ 2k_β‖N′^β T‖_{C_E}, with the component
    ``square`` checking max of the two square functions of D′_j(T) against k_β.
    On L^p, 1 < p ≤ 2: the decomposition infimum over D′_j(T) = V_j + W_j is bounded
    from above and compared with k_βK_{E*}²; a miss is inconclusive.
    """
    if not beta >= 0.5 or not math.isfinite(beta):
        raise InvalidInputError(f"`beta` must be at least ½, got {beta!r}.")
    n = check_size(n, LIMITS.dense_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    informational = beta == 0.5
    if sp.two_convex:
        concave = False
        bound = None if informational else 2.0 * constant_k_beta(beta)
        totals = RatioTotals(bound_constant=bound)
    elif sp.kind == "lp" and 1.0 < sp.p <= 2.0:
        concave = True
        if informational:
            totals = RatioTotals(bound_constant=None)
        else:
            k_dual = SpaceConstant.of(dual_space(sp), c)
            totals = RatioTotals(bound_constant=constant_k_beta(beta) * k_dual.value**2)
            totals = with_notes(totals, k_dual.notes)
    else:
        raise UnsupportedSpaceError(f"{sp} is neither 2-convex nor L^p with 1 < p ≤ 2.")
    if informational:
        totals.note("β = ½: the UMD constant is not computed; empirical worst ratio only")
    iterations = DEFAULTS.decomposition.max_iterations if max_iterations is None else max_iterations
    logger.info("checking car-reverse (n=%d, %s, β=%g, %d trials)", n, sp, beta, trials)

    def evaluate(label: str, t: CarElement) -> list[Observation]:
        rhs = schatten_norm(car_number(t, beta).to_dense(), sp)
        if concave:
            result = best_car_decomposition(t, sp, max_iterations=iterations)
            note = None
            if not result.converged:
                note = "decomposition descent did not converge on some inputs; best split kept"
            return [
                Observation(
                    result.value,
                    rhs,
                    label,
                    witness=lambda: {
                        "trivial": result.trivial,
                        "descent": result.descent,
                        **describe_car(t),
                    },
                    note=note,
                )
            ]
        out = [
            Observation(
                schatten_norm(symmetrized_gradient(t), sp),
                rhs,
                label,
                witness=lambda: describe_car(t),
            )
        ]
        if not informational:
            rows, cols = _square_functions(t)
            out.append(
                Observation(
                    max(schatten_norm(rows, sp), schatten_norm(cols, sp)),
                    rhs,
                    label,
                    witness=lambda: describe_car(t),
                    component="square",
                    bound=constant_k_beta(beta),
                )
            )
        return out

    run_plan(
        totals,
        _car_plan(n, trials, seed),
        evaluate,
        tol=tol,
        workers=workers,
        abort_on_corpus_failure=not concave,
    )
    mode: Mode = "informational" if informational else ("upper-bound" if concave else "inequality")
    params = {"n": n, **space_params(sp, c), "beta": beta, "trials": trials}
    return finish_report(
        "car-reverse",
        totals,
        params=params,
        tol=tol,
        seed=seed,
        mode=mode,
        emit_witness=emit_witness,
    )


def _require_two_convex(sp: FunctionSpace) -> None:
    if not sp.two_convex:
        raise UnsupportedSpaceError(f"this lemma needs a 2-convex space (p ≥ 2), got {sp}.")


def _projection_observations(
    label: str,
    s: PauliElement,
    components: list[np.ndarray],
    adjoints: list[np.ndarray],
    sp: FunctionSpace,
    witness: Callable[[], dict[str, Any]],
) -> list[Observation]:
    norm = schatten_norm(to_dense(s), sp)
    return [
        Observation(schatten_norm(square_function(components), sp), norm, label, witness=witness),
        Observation(
            schatten_norm(square_function(adjoints), sp),
            norm,
            label,
            witness=witness,
            component="adjoint",
            bound=1.0,
        ),
    ]


def check_lemma53(
    n: int,
    sp: FunctionSpace,
    trials: int = 200,
    seed: int = 0,
    *,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """‖(Σ|S_j|²)^½‖_{C_E} ≤ ‖S‖_{C_E} and ‖(Σ|S_j*P_j|²)^½‖_{C_E} ≤ ‖S‖_{C_E}.

    S ranges over M_{2^n}, S_j = P_jΠ_j(S) ∈ M_n and E is 2-convex; the second
    inequality is the component ``adjoint``.
    """
    _require_two_convex(sp)
    n = check_size(n, min(PROJECTION_MAX_N, LIMITS.dense_max_n))
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    p_dense = [to_dense(pauli_generator("P", j, n)) for j in range(1, n + 1)]
    totals = RatioTotals(bound_constant=1.0)
    logger.info("checking lemma53 (n=%d, %s, %d trials)", n, sp, trials)

    def evaluate(label: str, s: PauliElement) -> list[Observation]:
        parts = [
            to_dense(pauli_mul(pauli_generator("P", j, n), projection_pi(s, j)))
            for j in range(1, n + 1)
        ]
        adjoints = [part.conj().T @ p for part, p in zip(parts, p_dense)]
        return _projection_observations(label, s, parts, adjoints, sp, lambda: describe_pauli(s))

    run_plan(totals, _matrix_plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, "space": sp.descriptor, "trials": trials}
    return finish_report(
        "lemma53", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


def check_car_lemma(
    n: int,
    sp: FunctionSpace,
    trials: int = 200,
    seed: int = 0,
    *,
    tol: float | None = None,
    workers: int | None = None,
    emit_witness: bool | None = None,
) -> Report:
    """‖(Σ|S_j|²)^½‖_{C_E} ≤ ‖S‖_{C_E} and ‖(Σ|S_j*|²)^½‖_{C_E} ≤ ‖S‖_{C_E}, S_j = P′_jΠ′_j(S)."""
    _require_two_convex(sp)
    n = check_size(n, min(PROJECTION_MAX_N, LIMITS.dense_max_n))
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    totals = RatioTotals(bound_constant=1.0)
    logger.info("checking car-lemma (n=%d, %s, %d trials)", n, sp, trials)

    def evaluate(label: str, s: PauliElement) -> list[Observation]:
        parts = [car_components(s, j).to_dense() for j in range(1, n + 1)]
        adjoints = [part.conj().T for part in parts]
        return _projection_observations(label, s, parts, adjoints, sp, lambda: describe_pauli(s))

    run_plan(totals, _matrix_plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, "space": sp.descriptor, "trials": trials}
    return finish_report(
        "car-lemma", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


def check_derivation_khintchine(
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
    """‖𝓓(T)‖_{C_E} ≤ K_E‖(Σ|D_jT|²)^½‖_{C_E} for T = I_n(f) ∈ M_n."""
    n = check_size(n, LIMITS.dense_max_n)
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    k_e = SpaceConstant.of(sp, c)
    totals = with_notes(RatioTotals(bound_constant=k_e.value), k_e.notes)
    logger.info("checking derivation-khintchine (n=%d, %s, %d trials)", n, sp, trials)

    def evaluate(label: str, f: Any) -> list[Observation]:
        t = embed_function(f)
        lhs = schatten_norm(to_dense(derivation(t)), sp)
        parts = [to_dense(pauli_d_operator(t, j)) for j in range(1, n + 1)]
        rhs = schatten_norm(square_function(parts), sp)
        return [Observation(lhs, rhs, label, witness=lambda: describe_function(f))]

    plan = TrialPlan(
        corpus=cube_corpus(n),
        trials=trials,
        make_trial=lambda i: trial_function(seed, i, n),
    )
    run_plan(totals, plan, evaluate, tol=tol, workers=workers)
    params = {"n": n, **space_params(sp, c), "trials": trials}
    return finish_report(
        "derivation-khintchine",
        totals,
        params=params,
        tol=tol,
        seed=seed,
        emit_witness=emit_witness,
    )


def check_projection_norm(
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
    """‖Π(S)‖_{C_q} ≤ K_q‖S‖_{C_q} for q ≥ 2, where Π = Σ_j Π_j."""
    if sp.kind != "lp" or sp.p < 2.0:
        raise UnsupportedSpaceError(f"the projection bound needs C_q with q ≥ 2, got {sp}.")
    n = check_size(n, min(PROJECTION_MAX_N, LIMITS.dense_max_n))
    trials = check_trials(trials)
    tol = resolve_tol(tol)
    k_e = SpaceConstant.of(sp, c)
    totals = with_notes(RatioTotals(bound_constant=k_e.value), k_e.notes)
    logger.info("checking projection-norm (n=%d, %s, %d trials)", n, sp, trials)

    def evaluate(label: str, s: PauliElement) -> list[Observation]:
        lhs = schatten_norm(to_dense(projection_pi_total(s)), sp)
        rhs = schatten_norm(to_dense(s), sp)
        return [Observation(lhs, rhs, label, witness=lambda: describe_pauli(s))]

    run_plan(totals, _matrix_plan(n, trials, seed), evaluate, tol=tol, workers=workers)
    params = {"n": n, **space_params(sp, c), "trials": trials}
    return finish_report(
        "projection-norm", totals, params=params, tol=tol, seed=seed, emit_witness=emit_witness
    )


__all__ = [
    "PROJECTION_MAX_N",
    "check_car_concentration",
    "check_car_lemma",
    "check_car_main",
    "check_car_reverse",
    "check_derivation_khintchine",
    "check_lemma53",
    "check_projection_norm",
]
