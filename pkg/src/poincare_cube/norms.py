"""Function-space norms on the cube and Schatten norms on matrices.

Every norm here is taken with respect to a probability: L^p norms average over the
2^n points of Ω_n, and Schatten norms average over the singular values, i.e. they
use the normalized trace τ_n(Id) = 1 rather than the counting trace. With that
convention ‖embed(f)‖_{C_E} = ‖f‖_E.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy import linalg, optimize, special

from .config.defaults import UNIVERSAL_CONSTANT_C
from .cube import CubeFunction
from .errors import InvalidInputError, NumericError, UnsupportedSpaceError

logger = logging.getLogger(__name__)

SpaceKind = Literal["lp", "linf", "orlicz"]

# Concavity index established for Φ(x) = x² log(1 + x²).
ORLICZ_CONCAVITY = 6
_LUXEMBURG_BRACKET_STEPS = 200


@dataclass(frozen=True)
class FunctionSpace:
    """A symmetric function space: L^p (1 ≤ p < ∞), L^∞ or the Orlicz space L^Φ."""

    kind: SpaceKind
    p: float | None = None

    def __post_init__(self) -> None:
        if self.kind == "lp":
            if self.p is None or not math.isfinite(self.p) or self.p < 1:
                raise InvalidInputError(f"`p` must be a finite exponent ≥ 1, got {self.p!r}.")
        elif self.p is not None:
            raise InvalidInputError(f"space {self.kind!r} takes no exponent, got {self.p!r}.")

    @classmethod
    def lp(cls, p: float) -> FunctionSpace:
        return cls("lp", float(p))

    @classmethod
    def linf(cls) -> FunctionSpace:
        return cls("linf")

    @classmethod
    def orlicz(cls) -> FunctionSpace:
        return cls("orlicz")

    @property
    def two_convex(self) -> bool:
        if self.kind == "lp":
            return self.p >= 2
        return True

    @property
    def two_concave(self) -> bool:
        return self.kind == "lp" and self.p <= 2

    @property
    def descriptor(self) -> str:
        if self.kind == "lp":
            return f"lp:{self.p:g}"
        return self.kind

    def __str__(self) -> str:
        if self.kind == "lp":
            return f"L^{self.p:g}"
        return "L^∞" if self.kind == "linf" else "L^Φ"


def parse_space(text: str) -> FunctionSpace:
    """Parse ``lp:<p>``, ``linf`` or ``orlicz``."""
    token = text.strip().lower()
    if token in {"linf", "lp:inf"}:
        return FunctionSpace.linf()
    if token == "orlicz":
        return FunctionSpace.orlicz()
    kind, sep, raw_p = token.partition(":")
    if kind != "lp" or not sep:
        raise InvalidInputError(
            f"Invalid space {text!r}. Expected one of: lp:<p>, linf, orlicz."
        )
    try:
        p = float(raw_p)
    except ValueError as exc:
        raise InvalidInputError(f"Invalid exponent in space {text!r}.") from exc
    if math.isinf(p):
        return FunctionSpace.linf()
    return FunctionSpace.lp(p)


def dual_space(sp: FunctionSpace) -> FunctionSpace:
    if sp.kind == "linf":
        return FunctionSpace.lp(1.0)
    if sp.kind == "orlicz":
        raise UnsupportedSpaceError("the dual of L^Φ is not modelled.")
    if sp.p == 1:
        return FunctionSpace.linf()
    return FunctionSpace.lp(sp.p / (sp.p - 1.0))


def _is_even_integer(p: float) -> bool:
    return float(p).is_integer() and int(p) % 2 == 0


def khintchine_constant(sp: FunctionSpace, c: float | None = None) -> float:
    """K_E for the upper Khintchine inequality in E.

    2-concave spaces have K_E = 1. L^{2k} uses the sharp value ((2k−1)!!)^{1/2k};
    any other L^q with q > 2 gets C√q, and L^Φ gets 6C, where C is the
    configured universal constant.
    """
    c = UNIVERSAL_CONSTANT_C if c is None else c
    if sp.two_concave:
        return 1.0
    if sp.kind == "lp":
        if _is_even_integer(sp.p):
            k = int(sp.p) // 2
            return float(special.factorial2(2 * k - 1, exact=True)) ** (1.0 / (2 * k))
        return c * math.sqrt(sp.p)
    if sp.kind == "orlicz":
        return c * ORLICZ_CONCAVITY
    raise UnsupportedSpaceError(f"{sp} has no finite concavity index; K_E is not available.")


def space_caveats(sp: FunctionSpace, c: float | None = None) -> list[str]:
    """Report notes attached to any bound that consumes ``khintchine_constant(sp)``."""
    c = UNIVERSAL_CONSTANT_C if c is None else c
    if sp.two_concave or (sp.kind == "lp" and _is_even_integer(sp.p)):
        return []
    if sp.kind == "linf":
        return ["no Khintchine constant for L^∞"]
    return ["non-sharp Khintchine constant", f"conditional on C = {c:g}"]


def phi(x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """The Orlicz function Φ(x) = x² log(1 + x²)."""
    x = np.asarray(x, dtype=np.float64)
    return x**2 * np.log1p(x**2)


def luxemburg_norm(values: npt.ArrayLike) -> float:
    """inf{t > 0 : E Φ(|v|/t) ≤ 1} under the uniform probability on the entries."""
    a = np.abs(np.asarray(values)).ravel()
    top = float(a.max(initial=0.0))
    if top == 0.0:
        return 0.0

    def excess(t: float) -> float:
        return float(phi(a / t).mean()) - 1.0

    hi = 2.0 * top
    lo = 0.5 * top
    for _ in range(_LUXEMBURG_BRACKET_STEPS):
        if excess(lo) > 0:
            break
        lo *= 0.5
    else:
        raise NumericError("could not bracket the Luxemburg norm.")
    return float(optimize.brentq(excess, lo, hi, xtol=1e-14 * top, rtol=1e-15, maxiter=200))


def sequence_norm(values: npt.ArrayLike, sp: FunctionSpace) -> float:
    """The E-norm of a finite sequence under the uniform probability on its entries."""
    a = np.abs(np.asarray(values)).ravel()
    if a.size == 0:
        raise InvalidInputError("cannot take the norm of an empty sequence.")
    if sp.kind == "linf":
        return float(a.max())
    if sp.kind == "orlicz":
        return luxemburg_norm(a)
    top = float(a.max())
    if top == 0.0:
        return 0.0
    return top * float(np.mean((a / top) ** sp.p)) ** (1.0 / sp.p)


def function_norm(f: CubeFunction, sp: FunctionSpace) -> float:
    return sequence_norm(f.values, sp)


def _square(m: npt.ArrayLike, name: str = "M") -> npt.NDArray[np.complex128]:
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"`{name}` must be a square matrix, got shape {arr.shape}.")
    return arr


def singular_values(m: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Singular values in decreasing order, tiny negatives clamped to 0."""
    arr = _square(m)
    try:
        s = linalg.svdvals(arr)
    except linalg.LinAlgError as exc:
        raise NumericError(f"singular value decomposition failed: {exc}") from exc
    return np.clip(np.sort(s)[::-1], 0.0, None)


def schatten_norm(m: npt.ArrayLike, sp: FunctionSpace) -> float:
    """‖M‖_{C_E}: the E-norm of the singular values under the normalized trace."""
    return sequence_norm(singular_values(m), sp)


def psd_sqrt(h: npt.ArrayLike, tol: float = 1e-10) -> npt.NDArray[np.complex128]:
    """The positive square root of a Hermitian positive semidefinite matrix."""
    arr = _square(h, "H")
    herm = 0.5 * (arr + arr.conj().T)
    try:
        w, v = linalg.eigh(herm)
    except linalg.LinAlgError as exc:
        raise NumericError(f"Hermitian eigensolver failed: {exc}") from exc
    scale = max(1.0, float(np.abs(w).max(initial=0.0)))
    if w.size and w.min() < -tol * scale:
        raise InvalidInputError(f"matrix is not positive semidefinite (eigenvalue {w.min():.3g}).")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root) @ v.conj().T


def abs_operator(m: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """|M| = (M*M)^{1/2}."""
    arr = _square(m)
    return psd_sqrt(arr.conj().T @ arr)


def square_function(ops: Sequence[npt.ArrayLike]) -> npt.NDArray[np.complex128]:
    """(Σ_j S_j* S_j)^{1/2} for a nonempty family of equal-size matrices."""
    if not ops:
        raise InvalidInputError("`ops` must contain at least one matrix.")
    total = None
    for op in ops:
        arr = _square(op, "S_j")
        term = arr.conj().T @ arr
        total = term if total is None else total + term
    return psd_sqrt(total)


def normalized_trace(m: npt.ArrayLike) -> complex:
    arr = _square(m)
    return complex(np.trace(arr) / arr.shape[0])


__all__ = [
    "ORLICZ_CONCAVITY",
    "FunctionSpace",
    "abs_operator",
    "dual_space",
    "function_norm",
    "khintchine_constant",
    "luxemburg_norm",
    "normalized_trace",
    "parse_space",
    "phi",
    "psd_sqrt",
    "schatten_norm",
    "sequence_norm",
    "singular_values",
    "space_caveats",
    "square_function",
]
