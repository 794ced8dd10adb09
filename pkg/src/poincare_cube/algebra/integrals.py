"""Angular integral representations on M_{2^n}.

Each integral has the form ∫₀^{π/2} w(θ)·X(rotate(T, θ)) dθ where X keeps a fixed set of
words, so it is evaluated by integrating the trigonometric coefficients of a
:class:`~poincare_cube.algebra.pauli.RotationOrbit` as one vector-valued integrand.
"""

from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np
import numpy.typing as npt
from scipy import special

from ..cube import d_operator
from ..errors import InvalidDomainError, InvalidInputError
from ..quadrature import integrate_singular
from ..spectral import HALF_PI, apply_multiplier, neg_log_cos, number_multiplier
from .pauli import (
    PauliElement,
    RotationOrbit,
    check_site,
    derivation,
    embed_function,
    extract_function,
    high_mask,
    pauli_generator,
    pauli_mul,
    pi_range_mask,
)

logger = logging.getLogger(__name__)

Weight = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


def integrate_orbit(
    orbit: RotationOrbit, weight: Weight, tol: float, *, left_order: float = 0.0
) -> PauliElement:
    """∫₀^{π/2} weight(θ)·(orbit at θ) dθ, term by term."""
    if orbit.words.size == 0:
        return PauliElement.zero(orbit.n)

    def integrand(theta: npt.NDArray[np.float64]) -> np.ndarray:
        return orbit.coefficients(theta) * weight(theta)[:, None]

    result = integrate_singular(integrand, 0.0, HALF_PI, tol, left_order=left_order)
    logger.debug(
        "integrated %d orbit words (%d evaluations, error %.3g)",
        orbit.words.size,
        result.evaluations,
        result.error_estimate,
    )
    return PauliElement(orbit.n, orbit.words, np.atleast_1d(result.value))


def fractional_number_via_rotation(
    t: PauliElement, alpha: float, tol: float = 1e-10
) -> PauliElement:
    """N^α(T) for T ∈ M_n from its rotation representation.

    N^α(T) = −Γ(1−α)^{−1} 𝓔_{M_n} ∫₀^{π/2} e^{θ𝓓}𝓓(T)·(−log cos θ)^{−α} dθ.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidInputError(f"exponent `alpha` must be in (0, 1), got {alpha!r}.")
    orbit = RotationOrbit(derivation(t))
    # 𝓔_{M_n} applied before integrating
    orbit = orbit.restrict((orbit.words & np.uint64(high_mask(t.n))) == 0)
    integral = integrate_orbit(
        orbit,
        lambda theta: neg_log_cos(theta) ** (-alpha),
        tol,
        left_order=max(0.0, 2 * alpha - 1),
    )
    return integral * (-1.0 / float(special.gamma(1.0 - alpha)))


def d_inverse_power_integral(
    t: PauliElement, beta: float, j: int, tol: float = 1e-10
) -> PauliElement:
    """P_jΠ_j ∫₀^{π/2} rotate(T, θ)(−log cos θ)^{β−1} dθ for T ∈ M_n.

    This equals Γ(β)·D_jN^{−β}(T).
    """
    if not beta > 0.5:
        raise InvalidInputError(f"`beta` must exceed ½, got {beta!r}.")
    if not t.is_in_mn():
        raise InvalidDomainError("`t` must lie in M_n.")
    j = check_site(j, t.n)
    orbit = RotationOrbit(t)
    orbit = orbit.restrict(pi_range_mask(orbit.words, t.n, j))
    integral = integrate_orbit(
        orbit,
        lambda theta: neg_log_cos(theta) ** (beta - 1.0),
        tol,
        left_order=max(0.0, 1.0 - 2 * beta),
    )
    return pauli_mul(pauli_generator("P", j, t.n), integral)


def d_inverse_power_spectral(t: PauliElement, beta: float, j: int) -> PauliElement:
    """Γ(β)·D_jN^{−β}(T) computed from the Walsh expansion of T ∈ M_n."""
    f = apply_multiplier(extract_function(t), number_multiplier(-beta))
    return embed_function(d_operator(f, j)) * float(special.gamma(beta))


__all__ = [
    "d_inverse_power_integral",
    "d_inverse_power_spectral",
    "fractional_number_via_rotation",
    "integrate_orbit",
]
