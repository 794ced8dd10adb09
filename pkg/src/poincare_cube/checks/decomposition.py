"""Upper bounds for the decomposition infima of the reverse inequalities on 2-concave spaces.

Cube: inf over ∂_j f = g_j + h_j of ‖(Σ|g_j|²)^½‖_p + ‖(Σ|h_j∗δ_{e_j}|²)^½‖_p.
CAR:  inf over D′_j(T) = V_j + W_j of ‖(Σ V_j*V_j)^½‖_{C_p} + ‖(Σ W_jW_j*)^½‖_{C_p}.

Both trivial splits are always evaluated. A descent then minimizes a smoothed
objective with L-BFGS-B starting from the half split; the exact objective at the
point it reaches is a valid upper bound whether or not the descent converged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cache

import numpy as np
import numpy.typing as npt
from scipy import linalg, optimize

from ..algebra.car import CarElement, car_annihilation
from ..cube import CubeFunction, mask_to_subset, partial_derivative
from ..errors import NumericError, UnsupportedSpaceError
from ..norms import FunctionSpace, schatten_norm, sequence_norm, square_function

logger = logging.getLogger(__name__)

# relative size of the smoothing floor added under every square root
SMOOTHING = 1e-7


@dataclass(frozen=True)
class DecompositionResult:
    value: float
    trivial: float
    descent: float
    converged: bool
    iterations: int


def _exponent(sp: FunctionSpace) -> float:
    if sp.kind != "lp":
        raise UnsupportedSpaceError(f"decomposition descent needs an L^p space, got {sp}.")
    return float(sp.p)


def _pack(z: npt.NDArray[np.complex128]) -> npt.NDArray[np.float64]:
    return np.concatenate([z.real.ravel(), z.imag.ravel()])


def _unpack(x: npt.NDArray[np.float64], shape: tuple[int, ...]) -> npt.NDArray[np.complex128]:
    half = x.size // 2
    return (x[:half] + 1j * x[half:]).reshape(shape)


def _minimize(fun, x0: npt.NDArray[np.float64], max_iterations: int) -> optimize.OptimizeResult:
    result = optimize.minimize(
        fun, x0, jac=True, method="L-BFGS-B", options={"maxiter": max_iterations}
    )
    if not result.success:
        logger.debug("decomposition descent stopped: %s", result.message)
    return result


def _power_mean_norm(
    a: npt.NDArray[np.float64], p: float
) -> tuple[float, npt.NDArray[np.float64]]:
    """(mean a^p)^{1/p} for positive a and its gradient with respect to a."""
    value = float(np.mean(a**p)) ** (1.0 / p)
    return value, a ** (p - 1.0) * value ** (1.0 - p) / a.size


def best_cube_decomposition(
    f: CubeFunction, sp: FunctionSpace, *, max_iterations: int
) -> DecompositionResult:
    p = _exponent(sp)
    n = f.n
    diffs = np.stack([partial_derivative(f, j).values for j in range(1, n + 1)])
    flips = np.stack([np.arange(f.size) ^ (1 << (j - 1)) for j in range(1, n + 1)])
    rows = np.arange(n)[:, None]
    trivial = sequence_norm(np.sqrt(np.sum(np.abs(diffs) ** 2, axis=0)), sp)
    if trivial == 0.0:
        return DecompositionResult(0.0, 0.0, 0.0, True, 0)
    eps2 = (SMOOTHING * float(np.abs(diffs).max())) ** 2

    def exact(h: npt.NDArray[np.complex128]) -> float:
        g = diffs - h
        shifted = h[rows, flips]
        return sequence_norm(np.sqrt(np.sum(np.abs(g) ** 2, axis=0)), sp) + sequence_norm(
            np.sqrt(np.sum(np.abs(shifted) ** 2, axis=0)), sp
        )

    def smoothed(x: npt.NDArray[np.float64]) -> tuple[float, npt.NDArray[np.float64]]:
        h = _unpack(x, diffs.shape)
        g = diffs - h
        a = np.sqrt(np.sum(np.abs(g) ** 2, axis=0) + eps2)
        b = np.sqrt(np.sum(np.abs(h[rows, flips]) ** 2, axis=0) + eps2)
        fa, wa = _power_mean_norm(a, p)
        fb, wb = _power_mean_norm(b, p)
        # B(y) sees h_j at y e_j, so its weight is read back at the flipped point
        grad = -(wa / a)[None, :] * g + (wb / b)[flips] * h
        return fa + fb, _pack(grad)

    start = 0.5 * diffs
    result = _minimize(smoothed, _pack(start), max_iterations)
    descent = exact(_unpack(result.x, diffs.shape))
    return DecompositionResult(
        min(trivial, descent), trivial, descent, bool(result.success), int(result.nit)
    )


@cache
def _car_basis(n: int) -> npt.NDArray[np.complex128]:
    """Dense Q′_A for every mask A, stacked along the first axis."""
    basis = np.stack(
        [CarElement.basis(n, mask_to_subset(mask)).to_dense() for mask in range(1 << n)]
    )
    basis.setflags(write=False)
    return basis


def _smoothed_schatten(
    ops: npt.NDArray[np.complex128], p: float, eps2: float, *, left: bool
) -> tuple[float, npt.NDArray[np.complex128]]:
    """‖(Σ X_j*X_j + ε²)^½‖_{C_p} (or X_jX_j* when ``left``) and its gradient in each X_j."""
    adj = np.conj(np.swapaxes(ops, 1, 2))
    gram = np.einsum("jab,jbc->ac", ops, adj) if left else np.einsum("jab,jbc->ac", adj, ops)
    try:
        w, v = linalg.eigh(0.5 * (gram + gram.conj().T))
    except linalg.LinAlgError as exc:
        raise NumericError(f"Hermitian eigensolver failed: {exc}") from exc
    w = np.clip(w, 0.0, None) + eps2
    value = float(np.mean(w ** (0.5 * p))) ** (1.0 / p)
    m = (v * w ** (0.5 * p - 1.0)) @ v.conj().T
    scale = value ** (1.0 - p)
    grad = scale * (m @ ops if left else ops @ m)
    return value, grad


def best_car_decomposition(
    t: CarElement, sp: FunctionSpace, *, max_iterations: int
) -> DecompositionResult:
    p = _exponent(sp)
    n = t.n
    basis = _car_basis(n)
    dim = basis.shape[1]
    coeffs = np.stack([car_annihilation(t, j).alpha for j in range(1, n + 1)])
    ops = np.einsum("ja,axy->jxy", coeffs, basis)
    adj = [op.conj().T for op in ops]
    trivial = min(
        schatten_norm(square_function(list(ops)), sp), schatten_norm(square_function(adj), sp)
    )
    if trivial == 0.0:
        return DecompositionResult(0.0, 0.0, 0.0, True, 0)
    eps2 = (SMOOTHING * float(np.abs(coeffs).max())) ** 2

    def split(w: npt.NDArray[np.complex128]) -> tuple[np.ndarray, np.ndarray]:
        ws = np.einsum("ja,axy->jxy", w, basis)
        return ops - ws, ws

    def exact(w: npt.NDArray[np.complex128]) -> float:
        vs, ws = split(w)
        v_part = schatten_norm(square_function(list(vs)), sp)
        w_part = schatten_norm(square_function([x.conj().T for x in ws]), sp)
        return v_part + w_part

    def smoothed(x: npt.NDArray[np.float64]) -> tuple[float, npt.NDArray[np.float64]]:
        w = _unpack(x, coeffs.shape)
        vs, ws = split(w)
        fv, gv = _smoothed_schatten(vs, p, eps2, left=False)
        fw, gw = _smoothed_schatten(ws, p, eps2, left=True)
        # τ(Q′_A* G) projects a matrix gradient onto the coefficient of Q′_A
        grad = np.einsum("axy,jxy->ja", basis.conj(), gw - gv) / dim
        return fv + fw, _pack(grad)

    result = _minimize(smoothed, _pack(0.5 * coeffs), max_iterations)
    descent = exact(_unpack(result.x, coeffs.shape))
    return DecompositionResult(
        min(trivial, descent), trivial, descent, bool(result.success), int(result.nit)
    )


__all__ = ["DecompositionResult", "best_car_decomposition", "best_cube_decomposition"]
