"""Dense 2^n × 2^n backend used for eigensolving and for cross-checking the Pauli engine.

Matrices act on (ℂ²)^{⊗n} with site 1 as the most significant tensor factor, so
site j corresponds to bit n − j of a row index.
"""

from __future__ import annotations

from collections.abc import Iterable
from functools import cache, reduce

import numpy as np
import numpy.typing as npt

from ..cube import fwht
from ..errors import BudgetExceededError, InvalidInputError
from .pauli import (
    P_CODE,
    Q_CODE,
    U_CODE,
    PauliElement,
    check_site,
    check_sites,
    site_letters,
    site_shift,
)

DenseOperator = npt.NDArray[np.complex128]

# 256 × 256
DENSE_MAX_SITES = 8

_RHO = np.array([[1.0, 1.0], [-1.0, 1.0]], dtype=np.complex128) / np.sqrt(2.0)


def _check_dense_sites(n: int) -> int:
    n = check_sites(n)
    if n > DENSE_MAX_SITES:
        raise BudgetExceededError(
            f"dense operators are capped at {DENSE_MAX_SITES} sites, got n = {n}."
        )
    return n


def check_operator(m: npt.ArrayLike) -> tuple[DenseOperator, int]:
    """Validate a 2^n × 2^n matrix and return it with its site count."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"operator must be square, got shape {arr.shape}.")
    dim = arr.shape[0]
    if dim < 2 or dim & (dim - 1):
        raise InvalidInputError(f"operator dimension must be a power of two ≥ 2, got {dim}.")
    return arr, _check_dense_sites(dim.bit_length() - 1)


def _dense_masks(words: npt.NDArray[np.uint64], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-flip (x) and sign (z) masks in dense bit order for each word."""
    x = np.zeros(words.shape, dtype=np.int64)
    z = np.zeros(words.shape, dtype=np.int64)
    for j in range(1, n + 1):
        letters = site_letters(words, j)
        bit = 1 << (n - j)
        x |= np.where((letters == Q_CODE) | (letters == P_CODE), bit, 0)
        z |= np.where((letters == U_CODE) | (letters == P_CODE), bit, 0)
    return x, z


def to_dense(a: PauliElement) -> DenseOperator:
    """Σ_w c_w·w as a matrix; the word w has entries w[r, r ⊕ x] = i^{#P}(−1)^{|r ∧ z|}."""
    n = _check_dense_sites(a.n)
    dim = 1 << n
    rows = np.arange(dim, dtype=np.int64)
    out = np.zeros((dim, dim), dtype=np.complex128)
    x, z = _dense_masks(a.words, n)
    phase = (1j) ** np.bitwise_count(x & z)
    for xm, zm, c in zip(x, z, a.coeffs * phase):
        signs = 1.0 - 2.0 * (np.bitwise_count(rows & zm) & 1)
        out[rows, rows ^ xm] += c * signs
    return out


@cache
def _all_words(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Words indexed by dense (x, z) masks, and the i^{−#P} factor for each."""
    dim = 1 << n
    x = np.repeat(np.arange(dim, dtype=np.int64), dim)
    z = np.tile(np.arange(dim, dtype=np.int64), dim)
    words = np.zeros(dim * dim, dtype=np.uint64)
    for j in range(1, n + 1):
        xb = (x >> (n - j)) & 1
        zb = (z >> (n - j)) & 1
        # (x, z) = (1, 0) → Q, (0, 1) → U, (1, 1) → P
        words |= (xb ^ (3 * zb)).astype(np.uint64) << site_shift(j)
    return words, (-1j) ** np.bitwise_count(x & z)


def from_dense(m: npt.ArrayLike) -> PauliElement:
    """Expand a matrix in the word basis: c_w = τ_n(w·M)."""
    arr, n = check_operator(m)
    dim = 1 << n
    rows = np.arange(dim, dtype=np.int64)
    # shifted[x, r] = M[r ⊕ x, r]
    shifted = arr[rows[None, :] ^ rows[:, None], rows[None, :]]
    spectrum = fwht(shifted) / dim
    words, phase = _all_words(n)
    # w[r, r⊕x] carries i^{#P}, and τ(w M) pairs it with M[r⊕x, r]
    coeffs = spectrum.ravel() * np.conj(phase)
    return PauliElement(n, words, coeffs)


def identity_dense(n: int) -> DenseOperator:
    return np.eye(1 << _check_dense_sites(n), dtype=np.complex128)


def adjoint(m: DenseOperator) -> DenseOperator:
    return np.asarray(m).conj().T


def _site_signs(n: int, j: int) -> npt.NDArray[np.float64]:
    """Diagonal of U_j."""
    rows = np.arange(1 << n, dtype=np.int64)
    return 1.0 - 2.0 * ((rows >> (n - j)) & 1)


def vn_conjugation(m: npt.ArrayLike, inverse: bool = False) -> DenseOperator:
    """𝓥_n(T) = ρ^{⊗n} T ρ^{*⊗n}; sends M_n onto the diagonal matrices."""
    arr, n = check_operator(m)
    rho = reduce(np.kron, [_RHO] * n)
    if inverse:
        return rho.conj().T @ arr @ rho
    return rho @ arr @ rho.conj().T


def averaging_h(m: npt.ArrayLike, j: int) -> DenseOperator:
    """𝓗_j(T) = ½(T + U_j T U_j)."""
    arr, n = check_operator(m)
    s = _site_signs(n, check_site(j, n))
    return 0.5 * (arr + s[:, None] * arr * s[None, :])


def conditional_expectation_dense(m: npt.ArrayLike) -> DenseOperator:
    """𝓔_{M_n} = 𝓥_n^{−1} 𝓗_n⋯𝓗_1 𝓥_n.

    The averages 𝓗_j project onto the diagonal algebra, which 𝓥_n maps back onto M_n.
    """
    arr, n = check_operator(m)
    out = vn_conjugation(arr)
    for j in range(1, n + 1):
        out = averaging_h(out, j)
    return vn_conjugation(out, inverse=True)


def rotation_matrix(theta: float, n: int, sites: Iterable[int] | None = None) -> DenseOperator:
    """The unitary 𝓡_θ with 𝓡_θ* Q_j 𝓡_θ = cos θ Q_j + sin θ P_j for j in ``sites``.

    Each rotated site contributes diag(e^{−iθ/2}, e^{iθ/2}).
    """
    n = _check_dense_sites(n)
    chosen = range(1, n + 1) if sites is None else sorted({check_site(j, n) for j in sites})
    rows = np.arange(1 << n, dtype=np.int64)
    angle = np.zeros(1 << n, dtype=np.float64)
    for j in chosen:
        angle += (2.0 * ((rows >> (n - j)) & 1) - 1.0) * 0.5 * theta
    return np.diag(np.exp(1j * angle))


def rotate_dense(m: npt.ArrayLike, theta: float, sites: Iterable[int] | None = None) -> DenseOperator:
    arr, n = check_operator(m)
    r = rotation_matrix(theta, n, sites)
    return r.conj().T @ arr @ r


__all__ = [
    "DENSE_MAX_SITES",
    "DenseOperator",
    "adjoint",
    "averaging_h",
    "check_operator",
    "conditional_expectation_dense",
    "from_dense",
    "identity_dense",
    "rotate_dense",
    "rotation_matrix",
    "to_dense",
    "vn_conjugation",
]
