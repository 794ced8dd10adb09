"""Functions on the discrete cube Ω_n = {−1, 1}^n and their Walsh–Fourier expansion.

Points are encoded as n-bit masks: bit ``j - 1`` is set iff ``x_j = -1``, so mask 0
is the all-ones point. Subsets ``A ⊆ {1..n}`` use the same encoding, which makes
``coeffs[A]`` the Walsh coefficient f̂(A) = E[f·ω_A].
"""

from __future__ import annotations

import threading
from collections.abc import Iterable
from functools import cache
from numbers import Number
from typing import Any

import numpy as np
import numpy.typing as npt

from .errors import InvalidInputError

MAX_DIMENSION = 24

ComplexArray = npt.NDArray[np.complex128]
IndexArray = npt.NDArray[np.int64]


def check_dimension(n: int) -> int:
    if not isinstance(n, int | np.integer) or not 1 <= int(n) <= MAX_DIMENSION:
        raise InvalidInputError(f"`n` must be an integer in [1, {MAX_DIMENSION}], got {n!r}.")
    return int(n)


def check_coordinate(j: int, n: int) -> int:
    if not isinstance(j, int | np.integer) or not 1 <= int(j) <= n:
        raise InvalidInputError(f"coordinate `j` must be in [1, {n}], got {j!r}.")
    return int(j)


def dimension_of(length: int) -> int:
    """Return n for a sequence of length 2^n, rejecting anything else."""
    if length < 2 or length & (length - 1):
        raise InvalidInputError(f"length must be a power of two ≥ 2, got {length}.")
    return check_dimension(length.bit_length() - 1)


def subset_mask(subset: Iterable[int], n: int) -> int:
    """Encode a set of 1-based coordinates as a bitmask."""
    mask = 0
    for j in subset:
        mask |= 1 << (check_coordinate(j, n) - 1)
    return mask


def mask_to_subset(mask: int) -> tuple[int, ...]:
    return tuple(j + 1 for j in range(mask.bit_length()) if mask >> j & 1)


@cache
def levels(n: int) -> IndexArray:
    """|A| for every subset mask A of {1..n}."""
    idx = np.arange(1 << check_dimension(n), dtype=np.int64)
    out = np.zeros_like(idx)
    for j in range(n):
        out += (idx >> j) & 1
    out.setflags(write=False)
    return out


@cache
def _flip_index(n: int, j: int) -> IndexArray:
    out = np.arange(1 << n, dtype=np.int64) ^ (1 << (j - 1))
    out.setflags(write=False)
    return out


@cache
def _without_coordinate(n: int, j: int) -> IndexArray:
    idx = np.arange(1 << n, dtype=np.int64)
    out = idx[(idx & (1 << (j - 1))) == 0]
    out.setflags(write=False)
    return out


def fwht(v: npt.ArrayLike) -> ComplexArray:
    """Unnormalized butterfly along the last axis: out[A] = Σ_x v[x]·(−1)^{|A ∩ x|}."""
    out = np.array(v, dtype=np.complex128, copy=True)
    lead = out.shape[:-1]
    size = out.shape[-1]
    h = 1
    while h < size:
        view = out.reshape(lead + (-1, 2, h))
        a = view[..., 0, :].copy()
        b = view[..., 1, :]
        view[..., 0, :] = a + b
        view[..., 1, :] = a - b
        h <<= 1
    return out


def _as_vector(values: npt.ArrayLike, name: str) -> ComplexArray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1:
        raise InvalidInputError(f"`{name}` must be one-dimensional, got shape {arr.shape}.")
    dimension_of(arr.size)
    return arr


def walsh_transform(values: npt.ArrayLike) -> ComplexArray:
    """Walsh coefficients f̂(A) = 2^{−n} Σ_x f(x) ω_A(x) of a vector of point values."""
    v = _as_vector(values, "values")
    return fwht(v) / v.size


def inverse_walsh(coeffs: npt.ArrayLike) -> ComplexArray:
    """Point values f(x) = Σ_A f̂(A) ω_A(x)."""
    return fwht(_as_vector(coeffs, "coeffs"))


class CubeFunction:
    """A complex function on Ω_n held in point values, Walsh coefficients, or both.

    Instances are immutable. Whichever representation is missing is computed on
    first access and cached; the cache fill is serialized by a lock so instances
    can be shared between threads.
    """

    __slots__ = ("_coeffs", "_lock", "_values", "n")
    __array_ufunc__ = None

    def __init__(
        self,
        n: int,
        *,
        values: npt.ArrayLike | None = None,
        coeffs: npt.ArrayLike | None = None,
    ) -> None:
        self.n = check_dimension(n)
        if (values is None) == (coeffs is None):
            raise InvalidInputError("exactly one of `values` or `coeffs` must be given.")
        self._values: ComplexArray | None = None
        self._coeffs: ComplexArray | None = None
        self._lock = threading.Lock()
        if values is not None:
            self._values = self._freeze(values, "values")
        else:
            self._coeffs = self._freeze(coeffs, "coeffs")

    def _freeze(self, data: npt.ArrayLike | None, name: str) -> ComplexArray:
        arr = np.array(data, dtype=np.complex128, copy=True)
        if arr.shape != (1 << self.n,):
            raise InvalidInputError(
                f"`{name}` must have length 2^{self.n} = {1 << self.n}, got shape {arr.shape}."
            )
        arr.setflags(write=False)
        return arr

    @classmethod
    def from_values(cls, values: npt.ArrayLike) -> CubeFunction:
        arr = _as_vector(values, "values")
        return cls(dimension_of(arr.size), values=arr)

    @classmethod
    def from_coeffs(cls, coeffs: npt.ArrayLike) -> CubeFunction:
        arr = _as_vector(coeffs, "coeffs")
        return cls(dimension_of(arr.size), coeffs=arr)

    @classmethod
    def constant(cls, n: int, c: complex = 1.0) -> CubeFunction:
        coeffs = np.zeros(1 << check_dimension(n), dtype=np.complex128)
        coeffs[0] = c
        return cls(n, coeffs=coeffs)

    @classmethod
    def walsh(cls, n: int, subset: Iterable[int]) -> CubeFunction:
        """The Walsh function ω_A for a set of 1-based coordinates A."""
        coeffs = np.zeros(1 << check_dimension(n), dtype=np.complex128)
        coeffs[subset_mask(subset, n)] = 1.0
        return cls(n, coeffs=coeffs)

    @property
    def values(self) -> ComplexArray:
        if self._values is None:
            with self._lock:
                if self._values is None:
                    vals = inverse_walsh(self._coeffs)
                    vals.setflags(write=False)
                    self._values = vals
        return self._values

    @property
    def coeffs(self) -> ComplexArray:
        if self._coeffs is None:
            with self._lock:
                if self._coeffs is None:
                    coeffs = walsh_transform(self._values)
                    coeffs.setflags(write=False)
                    self._coeffs = coeffs
        return self._coeffs

    @property
    def size(self) -> int:
        return 1 << self.n

    def mean(self) -> complex:
        if self._coeffs is not None:
            return complex(self._coeffs[0])
        return complex(self.values.mean())

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.values.imag) <= tol))

    def conj(self) -> CubeFunction:
        return CubeFunction(self.n, values=np.conj(self.values))

    def abs(self) -> CubeFunction:
        return CubeFunction(self.n, values=np.abs(self.values))

    def translate(self, j: int) -> CubeFunction:
        """The convolution h∗δ_{e_j}: x ↦ h(x e_j)."""
        j = check_coordinate(j, self.n)
        return CubeFunction(self.n, values=self.values[_flip_index(self.n, j)])

    def allclose(self, other: CubeFunction, atol: float = 1e-12) -> bool:
        self._check_same_dimension(other)
        return bool(np.allclose(self.values, other.values, rtol=0.0, atol=atol))

    def _check_same_dimension(self, other: CubeFunction) -> None:
        if other.n != self.n:
            raise InvalidInputError(f"dimension mismatch: {self.n} vs {other.n}.")

    def _combine(self, other: Any, op: Any) -> CubeFunction:
        if isinstance(other, CubeFunction):
            self._check_same_dimension(other)
            if op in (np.add, np.subtract) and self._coeffs is not None and other._coeffs is not None:
                return CubeFunction(self.n, coeffs=op(self._coeffs, other._coeffs))
            return CubeFunction(self.n, values=op(self.values, other.values))
        if isinstance(other, Number):
            if op is np.multiply and self._coeffs is not None:
                return CubeFunction(self.n, coeffs=self._coeffs * other)
            return CubeFunction(self.n, values=op(self.values, other))
        return NotImplemented

    def __add__(self, other: Any) -> CubeFunction:
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other: Any) -> CubeFunction:
        return self._combine(other, np.subtract)

    def __rsub__(self, other: Any) -> CubeFunction:
        return (-self)._combine(other, np.add)

    def __mul__(self, other: Any) -> CubeFunction:
        return self._combine(other, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> CubeFunction:
        if not isinstance(other, Number):
            return NotImplemented
        return self * (1.0 / other)

    def __neg__(self) -> CubeFunction:
        if self._coeffs is not None:
            return CubeFunction(self.n, coeffs=-self._coeffs)
        return CubeFunction(self.n, values=-self.values)

    def __repr__(self) -> str:
        return f"CubeFunction(n={self.n}, mean={self.mean():.6g})"


def _check_subset_mask(subset: Iterable[int] | None, n: int) -> int:
    if subset is None:
        return (1 << n) - 1
    return subset_mask(subset, n)


def partial_derivative(f: CubeFunction, j: int) -> CubeFunction:
    """(∂_j f)(x) = f(x) − f(x e_j)."""
    j = check_coordinate(j, f.n)
    return CubeFunction(f.n, values=f.values - f.values[_flip_index(f.n, j)])


def d_operator(f: CubeFunction, j: int) -> CubeFunction:
    """D_j = ½ω_j∂_j, acting on coefficients by D_j ω_A = ω_{A∖{j}} for j ∈ A."""
    j = check_coordinate(j, f.n)
    without = _without_coordinate(f.n, j)
    out = np.zeros(f.size, dtype=np.complex128)
    out[without] = f.coeffs[without | (1 << (j - 1))]
    return CubeFunction(f.n, coeffs=out)


def partial_gradient_length(f: CubeFunction, subset: Iterable[int] | None) -> CubeFunction:
    """Pointwise (Σ_{j∈J} |∂_j f(x)|²)^{1/2}; ``None`` means all coordinates."""
    mask = _check_subset_mask(subset, f.n)
    total = np.zeros(f.size, dtype=np.float64)
    for j in range(1, f.n + 1):
        if mask >> (j - 1) & 1:
            total += np.abs(f.values - f.values[_flip_index(f.n, j)]) ** 2
    return CubeFunction(f.n, values=np.sqrt(total))


def gradient_length(f: CubeFunction) -> CubeFunction:
    """|∇f|(x) = (Σ_j |∂_j f(x)|²)^{1/2}."""
    return partial_gradient_length(f, None)


def laplacian(f: CubeFunction) -> CubeFunction:
    """Δf = Σ_j ∂_j ∂_j f evaluated in point space."""
    out = np.zeros(f.size, dtype=np.complex128)
    for j in range(1, f.n + 1):
        out += partial_derivative(partial_derivative(f, j), j).values
    return CubeFunction(f.n, values=out)


def riesz_product(n: int) -> CubeFunction:
    """f_n = Π_j (1 + ω_j) = 2^n·1_{(1,…,1)}; every Walsh coefficient equals 1."""
    n = check_dimension(n)
    values = np.zeros(1 << n, dtype=np.complex128)
    values[0] = float(1 << n)
    return CubeFunction(n, values=values)


def project_coordinates(
    f: CubeFunction, subset: Iterable[int]
) -> tuple[CubeFunction, CubeFunction]:
    """Split f = V_J f + P_{J̄} f by coefficient support.

    V_J keeps f̂(A) with A ∩ J ≠ ∅; P_{J̄} keeps A ⊆ J̄.
    """
    mask = subset_mask(subset, f.n)
    touches = (np.arange(f.size, dtype=np.int64) & mask) != 0
    v = np.where(touches, f.coeffs, 0.0)
    p = np.where(touches, 0.0, f.coeffs)
    return CubeFunction(f.n, coeffs=v), CubeFunction(f.n, coeffs=p)


__all__ = [
    "MAX_DIMENSION",
    "CubeFunction",
    "check_coordinate",
    "check_dimension",
    "d_operator",
    "dimension_of",
    "fwht",
    "gradient_length",
    "inverse_walsh",
    "laplacian",
    "levels",
    "mask_to_subset",
    "partial_derivative",
    "partial_gradient_length",
    "project_coordinates",
    "riesz_product",
    "subset_mask",
    "walsh_transform",
]
