"""Spectral multipliers on the cube and the angular integral representations.

A multiplier is a function m of the level k = |A|; applying it scales every Walsh
coefficient f̂(A) by m(|A|). The cosine semigroup, the heat semigroup and the
fractional powers of the Laplacian Δ = 4N are all of this form.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from functools import cache

import numpy as np
import numpy.typing as npt
from scipy import special

from .config.defaults import DEFAULTS
from .cube import CubeFunction, levels, subset_mask
from .errors import InvalidInputError
from .quadrature import integrate_singular

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi

LevelSymbol = Callable[[npt.NDArray[np.int64]], npt.ArrayLike]


@dataclass(frozen=True)
class SpectralMultiplier:
    """A level-dependent symbol k ↦ m(k), evaluated on integer arrays."""

    symbol: LevelSymbol
    label: str = "m"

    def table(self, n: int) -> npt.NDArray[np.complex128]:
        """m(0), …, m(n)."""
        ks = np.arange(n + 1, dtype=np.int64)
        return np.broadcast_to(np.asarray(self.symbol(ks), dtype=np.complex128), ks.shape).copy()

    def __mul__(self, other: SpectralMultiplier) -> SpectralMultiplier:
        first, second = self.symbol, other.symbol

        def product(ks: npt.NDArray[np.int64]) -> npt.ArrayLike:
            return np.asarray(first(ks), dtype=np.complex128) * np.asarray(second(ks))

        return SpectralMultiplier(product, f"{self.label}·{other.label}")

    @classmethod
    def from_table(cls, values: npt.ArrayLike, label: str = "table") -> SpectralMultiplier:
        table = np.asarray(values, dtype=np.complex128)

        def lookup(ks: npt.NDArray[np.int64]) -> npt.ArrayLike:
            if ks.max(initial=0) >= table.size:
                raise InvalidInputError(
                    f"multiplier table has {table.size} levels, level {int(ks.max())} requested."
                )
            return table[ks]

        return cls(lookup, label)


def apply_multiplier(f: CubeFunction, m: SpectralMultiplier) -> CubeFunction:
    """ĝ(A) = m(|A|)·f̂(A)."""
    return CubeFunction(f.n, coeffs=f.coeffs * m.table(f.n)[levels(f.n)])


def _check_angle(theta: float) -> float:
    if not 0.0 <= theta <= HALF_PI:
        raise InvalidInputError(f"angle `theta` must be in [0, π/2], got {theta!r}.")
    return float(theta)


def cosine_multiplier(theta: float) -> SpectralMultiplier:
    theta = _check_angle(theta)
    if theta == HALF_PI:
        # limit value: only the mean survives
        return SpectralMultiplier(lambda ks: (ks == 0).astype(np.float64), "cos^N(π/2)")
    c = math.cos(theta)
    return SpectralMultiplier(lambda ks: c ** ks.astype(np.float64), f"cos^N({theta:g})")


def heat_multiplier(t: float) -> SpectralMultiplier:
    if not t >= 0:
        raise InvalidInputError(f"time `t` must be nonnegative, got {t!r}.")
    return SpectralMultiplier(lambda ks: np.exp(-4.0 * t * ks), f"exp(-{t:g}Δ)")


def _power_symbol(scale: float, power: float) -> LevelSymbol:
    def symbol(ks: npt.NDArray[np.int64]) -> npt.ArrayLike:
        out = np.zeros(ks.shape, dtype=np.float64)
        positive = ks > 0
        out[positive] = (scale * ks[positive]) ** power
        return out

    return symbol


def fractional_multiplier(alpha: float) -> SpectralMultiplier:
    """(4k)^α with the value 0 at k = 0."""
    return SpectralMultiplier(_power_symbol(4.0, alpha), f"Δ^{alpha:g}")


def number_multiplier(power: float) -> SpectralMultiplier:
    """k^power with the value 0 at k = 0."""
    return SpectralMultiplier(_power_symbol(1.0, power), f"N^{power:g}")


def cosine_semigroup(f: CubeFunction, theta: float) -> CubeFunction:
    """cos^N θ(f) = Ef + Σ cos^{|A|}θ f̂(A) ω_A; θ = π/2 gives the constant Ef."""
    return apply_multiplier(f, cosine_multiplier(theta))


def partial_cosine_semigroup(f: CubeFunction, theta: float, subset: Iterable[int]) -> CubeFunction:
    """cos^{N_J}θ(f): scales f̂(A) by cos^{|A∩J|}θ."""
    theta = _check_angle(theta)
    mask = subset_mask(subset, f.n)
    touched = levels(f.n)[np.arange(f.size, dtype=np.int64) & mask]
    if theta == HALF_PI:
        factors = (touched == 0).astype(np.float64)
    else:
        factors = math.cos(theta) ** touched.astype(np.float64)
    return CubeFunction(f.n, coeffs=f.coeffs * factors)


def heat_semigroup(f: CubeFunction, t: float) -> CubeFunction:
    return apply_multiplier(f, heat_multiplier(t))


def fractional_laplacian(f: CubeFunction, alpha: float) -> CubeFunction:
    """Δ^α f with ĝ(A) = (4|A|)^α f̂(A) and ĝ(∅) = 0."""
    if not alpha > 0:
        raise InvalidInputError(f"exponent `alpha` must be positive, got {alpha!r}.")
    return apply_multiplier(f, fractional_multiplier(alpha))


def inverse_fractional_laplacian(f: CubeFunction, beta: float) -> CubeFunction:
    """Δ^{−β} on the mean-zero part of f (the mean is sent to 0)."""
    if not beta > 0:
        raise InvalidInputError(f"exponent `beta` must be positive, got {beta!r}.")
    return apply_multiplier(f, fractional_multiplier(-beta))


def number_operator(f: CubeFunction, power: float = 1.0) -> CubeFunction:
    if not power >= 0:
        raise InvalidInputError(f"`power` must be nonnegative, got {power!r}.")
    return apply_multiplier(f, number_multiplier(power))


def neg_log_cos(theta: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """−log cos θ on [0, π/2), accurate to full relative precision near 0."""
    theta = np.asarray(theta, dtype=np.float64)
    with np.errstate(divide="ignore"):
        small = -0.5 * np.log1p(-np.sin(theta) ** 2)
        large = -np.log(np.cos(theta))
    return np.where(theta < 0.25 * math.pi, small, large)


def level_weight_integrals(
    weight: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]],
    upper: float,
    n: int,
    tol: float,
    *,
    left_order: float = 0.0,
) -> npt.NDArray[np.float64]:
    """∫₀^upper w(θ)·k cos^{k−1}θ sin θ dθ for k = 1..n, as one vector integral."""
    ks = np.arange(1, n + 1, dtype=np.float64)

    def integrand(theta: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        w = weight(theta) * np.sin(theta)
        return w[:, None] * ks[None, :] * np.cos(theta)[:, None] ** (ks[None, :] - 1.0)

    result = integrate_singular(integrand, 0.0, upper, tol, left_order=left_order)
    logger.debug("per-level integrals for k ≤ %d: %d evaluations", n, result.evaluations)
    return np.atleast_1d(np.asarray(result.value, dtype=np.float64))


def _level_integrals(alpha: float, n: int, tol: float) -> npt.NDArray[np.float64]:
    """∫₀^{π/2} (−log cos θ)^{−α} k cos^{k−1}θ sin θ dθ for k = 1..n."""
    return level_weight_integrals(
        lambda theta: neg_log_cos(theta) ** (-alpha),
        HALF_PI,
        n,
        tol,
        left_order=max(0.0, 2 * alpha - 1),
    )


def convolution_multiplier(
    weight: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]],
    n: int,
    tol: float,
    *,
    upper: float = HALF_PI,
    left_order: float = 0.0,
) -> SpectralMultiplier:
    """The multiplier of f ↦ ∫₀^upper w(θ)·d/dθ cos^N θ(f) dθ, level by level."""
    per_level = level_weight_integrals(weight, upper, n, tol, left_order=left_order)
    return SpectralMultiplier.from_table(np.concatenate([[0.0], -per_level]), "∫w·d cos^N")


def fractional_laplacian_integral(
    f: CubeFunction, alpha: float, tol: float = 1e-10
) -> CubeFunction:
    """Δ^α f from the angular representation of N^α.

    Γ(1−α)N^α f = −∫₀^{π/2} (−log cos θ)^{−α} d/dθ cos^N θ(f) dθ, with the
    θ-derivative taken analytically level by level (−k cos^{k−1}θ sin θ). The
    result is scaled by 4^α since Δ = 4N.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidInputError(f"exponent `alpha` must be in (0, 1), got {alpha!r}.")
    per_level = _level_integrals(alpha, f.n, tol)
    table = np.concatenate([[0.0], per_level]) * (4.0**alpha / special.gamma(1.0 - alpha))
    return apply_multiplier(f, SpectralMultiplier.from_table(table, f"Δ^{alpha:g} (integral)"))


@cache
def constant_K_alpha(alpha: float) -> float:
    """K_α = ‖(−log cos θ)^{−α}‖_{L¹(0, π/2)} / Γ(1−α)."""
    if not 0.0 < alpha < 0.5:
        raise InvalidInputError(
            f"`alpha` must be in (0, ½) for (−log cos θ)^(−α) to be integrable, got {alpha!r}."
        )
    result = integrate_singular(
        lambda theta: neg_log_cos(theta) ** (-alpha),
        0.0,
        HALF_PI,
        DEFAULTS.quadrature.constant_tol,
        left_order=2 * alpha,
    )
    value = float(result.value) / float(special.gamma(1.0 - alpha))
    logger.debug("K_%g = %.15g (%d evaluations)", alpha, value, result.evaluations)
    return value


@cache
def constant_k_beta(beta: float) -> float:
    """k_β = ‖(−log cos θ)^{β−1}‖_{L¹(0, π/2)} / Γ(β)."""
    if not beta > 0.5:
        raise InvalidInputError(
            f"`beta` must exceed ½ for (−log cos θ)^(β−1) to be integrable, got {beta!r}."
        )
    result = integrate_singular(
        lambda theta: neg_log_cos(theta) ** (beta - 1.0),
        0.0,
        HALF_PI,
        DEFAULTS.quadrature.constant_tol,
        left_order=max(0.0, 2 * (1.0 - beta)),
    )
    value = float(result.value) / float(special.gamma(beta))
    logger.debug("k_%g = %.15g (%d evaluations)", beta, value, result.evaluations)
    return value


def gamma_integral_check(lam: float, beta: float, tol: float = 1e-11) -> tuple[float, float]:
    """Both sides of Γ(β)λ^{−β} = ∫₀^{π/2} cos^{λ−1}θ (−log cos θ)^{β−1} sin θ dθ."""
    if not lam > 0 or not beta > 0:
        raise InvalidInputError(f"`lam` and `beta` must be positive, got {lam!r}, {beta!r}.")
    lhs = float(special.gamma(beta)) * lam ** (-beta)

    def integrand(theta: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return np.cos(theta) ** (lam - 1.0) * neg_log_cos(theta) ** (beta - 1.0) * np.sin(theta)

    rhs = integrate_singular(integrand, 0.0, HALF_PI, tol, left_order=max(0.0, 1.0 - 2 * beta))
    return lhs, float(rhs.value)


__all__ = [
    "HALF_PI",
    "SpectralMultiplier",
    "apply_multiplier",
    "constant_K_alpha",
    "constant_k_beta",
    "convolution_multiplier",
    "cosine_multiplier",
    "cosine_semigroup",
    "fractional_laplacian",
    "fractional_laplacian_integral",
    "fractional_multiplier",
    "gamma_integral_check",
    "heat_multiplier",
    "heat_semigroup",
    "inverse_fractional_laplacian",
    "level_weight_integrals",
    "neg_log_cos",
    "number_multiplier",
    "number_operator",
    "partial_cosine_semigroup",
]
