"""Double-exponential quadrature for integrands with endpoint singularities.

All the angular integrals used by the library live on (0, π/2) and blow up (or
lose smoothness) at one or both ends. The engine maps (a, b) onto (0, 1), optionally
removes a known algebraic singularity at ``a`` by the power substitution
x − a = (b − a)·u^m with m = 1/(1 − γ), and applies the tanh-sinh rule with step
halving until successive levels agree. Integrands are vectorized: ``g`` receives a
1-D array of abscissae and returns either a 1-D array or a 2-D array whose rows
are vector-valued samples, real or complex.

If tanh-sinh has not converged after ``max_level`` halvings, the transformed
integrand is handed to :func:`scipy.integrate.quad_vec`.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy import integrate

from .config.defaults import DEFAULTS
from .errors import InvalidInputError, NumericError

logger = logging.getLogger(__name__)

Integrand = Callable[[npt.NDArray[np.float64]], npt.ArrayLike]

# never accept a result from fewer halvings than this
_MIN_LEVEL = 3
# contributions from abscissae this close to an endpoint are dropped if not finite
_NEGLIGIBLE_WEIGHT = 1e-200


@dataclass(frozen=True)
class QuadratureResult:
    """Outcome of :func:`integrate_singular`.

    ``value`` is a scalar for scalar integrands and an array for vector-valued ones;
    ``error_estimate`` is the max-norm difference between the last two refinement
    levels (or the adaptive fallback's estimate).
    """

    value: float | complex | np.ndarray
    error_estimate: float
    evaluations: int
    method: Literal["tanh-sinh", "adaptive"] = "tanh-sinh"


def _abscissae(t: npt.NDArray[np.float64]) -> tuple[np.ndarray, np.ndarray]:
    """Nodes u ∈ (0, 1) and weights du/dt for the tanh-sinh map u = ½(1 + tanh(½π sinh t))."""
    s = 0.5 * math.pi * np.sinh(t)
    with np.errstate(over="ignore", under="ignore"):
        decay = np.exp(-2.0 * np.abs(s))
        left = np.where(s <= 0, decay / (1.0 + decay), 1.0 / (1.0 + decay))
        weight = math.pi * np.cosh(t) * decay / (1.0 + decay) ** 2
    return left, weight


class _Transformed:
    """g pulled back to (0, 1), with the optional power substitution at the left end."""

    def __init__(self, g: Integrand, a: float, b: float, left_order: float) -> None:
        self.g = g
        self.a = a
        self.width = b - a
        self.power = 1.0 / (1.0 - left_order) if left_order > 0 else 1.0
        self.evaluations = 0

    def __call__(self, u: npt.NDArray[np.float64]) -> np.ndarray:
        with np.errstate(under="ignore"):
            if self.power == 1.0:
                x = self.a + self.width * u
                jac = np.full_like(u, self.width)
            else:
                x = self.a + self.width * u**self.power
                jac = self.width * self.power * u ** (self.power - 1.0)
        self.evaluations += u.size
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values = np.asarray(self.g(x))
            if not np.iscomplexobj(values):
                values = values.astype(np.float64)
            if values.shape[0] != u.size:
                raise InvalidInputError(
                    f"integrand returned leading dimension {values.shape[0]} for {u.size} abscissae."
                )
            out = values * jac.reshape((-1,) + (1,) * (values.ndim - 1))
        # abscissae that rounded onto an endpoint carry no mass
        at_endpoint = (x <= self.a) | (x >= self.a + self.width)
        if at_endpoint.any():
            out[at_endpoint] = 0.0
        return out


def _unwrap(value: np.ndarray) -> float | complex | np.ndarray:
    if value.ndim:
        return value
    return complex(value) if np.iscomplexobj(value) else float(value)


def _level_sum(transformed: _Transformed, t: npt.NDArray[np.float64]) -> np.ndarray:
    u, weight = _abscissae(t)
    keep = (u > 0.0) & (u < 1.0) & (weight > 0.0)
    u, weight = u[keep], weight[keep]
    samples = transformed(u)
    contributions = samples * weight.reshape((-1,) + (1,) * (samples.ndim - 1))
    bad = ~np.isfinite(contributions)
    if bad.any():
        bad_rows = bad.reshape(bad.shape[0], -1).any(axis=1)
        if np.any(weight[bad_rows] > _NEGLIGIBLE_WEIGHT):
            raise NumericError("integrand is not finite inside the interval.")
        contributions = np.where(bad, 0.0, contributions)
    return contributions.sum(axis=0)


def _adaptive_fallback(
    transformed: _Transformed, tol: float, partial: np.ndarray, partial_error: float
) -> QuadratureResult:
    def scalar_point(u: float) -> np.ndarray:
        return transformed(np.array([u], dtype=np.float64))[0]

    value, error = integrate.quad_vec(scalar_point, 0.0, 1.0, epsabs=tol, epsrel=0.0, limit=400)
    value = np.asarray(value)
    if not error <= tol:
        raise NumericError(
            f"quadrature did not reach tolerance {tol:g} (estimate {error:g}).",
            value=partial if partial_error <= error else value,
            error_estimate=min(partial_error, float(error)),
        )
    return QuadratureResult(
        value=_unwrap(value),
        error_estimate=float(error),
        evaluations=transformed.evaluations,
        method="adaptive",
    )


def integrate_singular(
    g: Integrand,
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    left_order: float = 0.0,
    max_level: int | None = None,
    t_max: float | None = None,
) -> QuadratureResult:
    """Integrate ``g`` over (a, b) to absolute tolerance ``tol``.

    Args:
        g: Vectorized integrand, finite on the open interval.
        a: Left endpoint.
        b: Right endpoint (> a).
        tol: Requested absolute tolerance (max-norm for vector integrands).
        left_order: Exponent γ ∈ [0, 1) with g(x) = O((x − a)^{−γ}) near ``a``.
            A positive value removes the singularity by substitution before the
            tanh-sinh rule is applied.
        max_level: Number of step halvings before falling back to adaptive
            quadrature. Defaults to the bundled quadrature settings.
        t_max: Truncation of the tanh-sinh abscissae.

    Returns:
        A :class:`QuadratureResult` whose error estimate is at most ``tol``.

    Raises:
        NumericError: Neither tanh-sinh nor the adaptive fallback met ``tol``; the
            exception carries the best partial value.
    """
    if not b > a:
        raise InvalidInputError(f"interval must satisfy a < b, got ({a}, {b}).")
    if not 0.0 <= left_order < 1.0:
        raise InvalidInputError(f"`left_order` must be in [0, 1), got {left_order}.")
    if not tol > 0:
        raise InvalidInputError(f"`tol` must be positive, got {tol}.")
    settings = DEFAULTS.quadrature
    max_level = settings.max_level if max_level is None else max_level
    t_max = settings.t_max if t_max is None else t_max

    transformed = _Transformed(g, float(a), float(b), float(left_order))
    h = 1.0
    steps = int(math.floor(t_max / h))
    running = _level_sum(transformed, np.arange(-steps, steps + 1, dtype=np.float64))
    previous = h * running
    error = math.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        steps = int(math.floor(t_max / h))
        odd = np.arange(-steps + (1 - steps % 2), steps + 1, 2, dtype=np.float64) * h
        running = running + _level_sum(transformed, odd)
        current = h * running
        error = float(np.max(np.abs(current - previous)))
        logger.debug("tanh-sinh level %d: error estimate %.3g", level, error)
        if level >= _MIN_LEVEL and error <= tol:
            value = np.asarray(current)
            return QuadratureResult(
                value=_unwrap(value),
                error_estimate=error,
                evaluations=transformed.evaluations,
            )
        previous = current

    logger.debug("tanh-sinh stalled at %.3g > %.3g; switching to adaptive quadrature", error, tol)
    return _adaptive_fallback(transformed, tol, np.asarray(previous), error)


__all__ = ["QuadratureResult", "integrate_singular"]
