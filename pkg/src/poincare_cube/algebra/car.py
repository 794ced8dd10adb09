"""The CAR algebra M′_n inside M_{2^n} via the Jordan–Wigner words.

Q′_j = U⊗…⊗U⊗Q⊗I⊗…⊗I and P′_j = U⊗…⊗U⊗P⊗I⊗…⊗I, with U on the j − 1 first sites.
The ordered products Q′_A = Q′_{a_1}⋯Q′_{a_k} (a_1 < … < a_k) are, up to a phase, single
Pauli words, so an element of M′_n is stored as its coefficient vector α over subsets
and converted to Pauli form through a cached word table.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cache
from numbers import Number
from typing import Any, Literal

import numpy as np
import numpy.typing as npt
from scipy import special

from ..cube import levels, subset_mask
from ..errors import InvalidDomainError, InvalidInputError
from ..norms import psd_sqrt
from ..spectral import HALF_PI, neg_log_cos
from .dense import DenseOperator, to_dense
from .integrals import integrate_orbit
from .pauli import (
    P_CODE,
    Q_CODE,
    U_CODE,
    PauliElement,
    RotationOrbit,
    check_site,
    check_sites,
    identity_element,
    pauli_mul,
    site_letters,
    site_shift,
)

CarKind = Literal["Q", "P"]


def _jordan_wigner_word(code: int, j: int) -> int:
    word = code << site_shift(j)
    for i in range(1, j):
        word |= U_CODE << site_shift(i)
    return word


def car_generator(kind: CarKind, j: int, n: int) -> PauliElement:
    """Q′_j or P′_j as a Pauli word."""
    n = check_sites(n)
    j = check_site(j, n)
    if kind not in ("Q", "P"):
        raise InvalidInputError(f"`kind` must be Q or P, got {kind!r}.")
    return PauliElement.basis(n, _jordan_wigner_word(Q_CODE if kind == "Q" else P_CODE, j))


@dataclass(frozen=True)
class CarWordTable:
    """Q′_A = phases[A]·words[A] for every subset mask A."""

    n: int
    words: npt.NDArray[np.uint64]
    phases: npt.NDArray[np.complex128]
    _order: npt.NDArray[np.int64]

    def lookup(self, words: npt.NDArray[np.uint64]) -> npt.NDArray[np.int64]:
        """Subset mask for each word, −1 where the word is not a Q′_A word."""
        sorted_words = self.words[self._order]
        pos = np.clip(np.searchsorted(sorted_words, words), 0, self.words.size - 1)
        found = sorted_words[pos] == words
        return np.where(found, self._order[pos], -1)


def _build_table(n: int, first: PauliElement | None) -> CarWordTable:
    size = 1 << n
    words = np.zeros(size, dtype=np.uint64)
    phases = np.ones(size, dtype=np.complex128)
    generators = [car_generator("Q", j, n) for j in range(1, n + 1)]
    if first is not None:
        words[0] = first.words[0]
        phases[0] = first.coeffs[0]
    for mask in range(1, size):
        low = mask & -mask
        # Q′_A = Q′_{min A}·Q′_{A∖min A}, prefixed by ``first`` when given
        rest = PauliElement.basis(n, int(words[mask ^ low]), phases[mask ^ low])
        if first is not None:
            # move Q′_{min A} to the left of ``first``: first·Q′_a = −Q′_a·first
            product = -pauli_mul(generators[low.bit_length() - 1], rest)
        else:
            product = pauli_mul(generators[low.bit_length() - 1], rest)
        words[mask] = product.words[0]
        phases[mask] = product.coeffs[0]
    for arr in (words, phases):
        arr.setflags(write=False)
    order = np.argsort(words, kind="stable")
    order.setflags(write=False)
    return CarWordTable(n, words, phases, order)


@cache
def car_word_table(n: int) -> CarWordTable:
    return _build_table(check_sites(n), None)


@cache
def pi_prime_table(n: int, j: int) -> CarWordTable:
    """P′_j Q′_A = phases[A]·words[A]: the orthonormal family spanning P′_j M′_n."""
    n = check_sites(n)
    return _build_table(n, car_generator("P", check_site(j, n), n))


class CarElement:
    """T = Σ_A α_A Q′_A ∈ M′_n, held as the coefficient vector α over subset masks."""

    __slots__ = ("alpha", "n")
    __array_ufunc__ = None

    def __init__(self, n: int, alpha: npt.ArrayLike) -> None:
        self.n = check_sites(n)
        arr = np.array(alpha, dtype=np.complex128, copy=True)
        if arr.shape != (1 << self.n,):
            raise InvalidInputError(
                f"`alpha` must have length 2^{self.n} = {1 << self.n}, got shape {arr.shape}."
            )
        arr.setflags(write=False)
        self.alpha = arr

    @classmethod
    def basis(cls, n: int, subset: Iterable[int], coeff: complex = 1.0) -> CarElement:
        alpha = np.zeros(1 << check_sites(n), dtype=np.complex128)
        alpha[subset_mask(subset, n)] = coeff
        return cls(n, alpha)

    @classmethod
    def from_pauli(cls, a: PauliElement) -> CarElement:
        """The Q′-coefficients of ``a``; raises if ``a`` has support outside M′_n."""
        table = car_word_table(a.n)
        masks = table.lookup(a.words)
        if np.any(masks < 0):
            raise InvalidDomainError("element has Pauli words outside the span of the Q′_A.")
        alpha = np.zeros(1 << a.n, dtype=np.complex128)
        alpha[masks] = a.coeffs * np.conj(table.phases[masks])
        return cls(a.n, alpha)

    def to_pauli(self) -> PauliElement:
        table = car_word_table(self.n)
        return PauliElement(self.n, table.words, self.alpha * table.phases)

    def to_dense(self) -> DenseOperator:
        return to_dense(self.to_pauli())

    def trace(self) -> complex:
        return complex(self.alpha[0])

    def adjoint(self) -> CarElement:
        return CarElement.from_pauli(self.to_pauli().adjoint())

    def allclose(self, other: CarElement, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.alpha, other.alpha, rtol=0.0, atol=atol))

    def __add__(self, other: Any) -> CarElement:
        if not isinstance(other, CarElement):
            return NotImplemented
        return CarElement(self.n, self.alpha + other.alpha)

    def __sub__(self, other: Any) -> CarElement:
        if not isinstance(other, CarElement):
            return NotImplemented
        return CarElement(self.n, self.alpha - other.alpha)

    def __neg__(self) -> CarElement:
        return CarElement(self.n, -self.alpha)

    def __mul__(self, other: Any) -> CarElement:
        if not isinstance(other, Number):
            return NotImplemented
        return CarElement(self.n, self.alpha * complex(other))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"CarElement(n={self.n}, nonzero={int(np.count_nonzero(self.alpha))})"


def as_car(t: CarElement | PauliElement) -> CarElement:
    if isinstance(t, CarElement):
        return t
    if isinstance(t, PauliElement):
        return CarElement.from_pauli(t)
    raise InvalidInputError(f"expected a CarElement or PauliElement, got {type(t).__name__}.")


@cache
def _below_counts(n: int, j: int) -> npt.NDArray[np.int64]:
    """#{i ∈ A : i < j} for every mask A."""
    masks = np.arange(1 << n, dtype=np.int64)
    return levels(n)[masks & ((1 << (j - 1)) - 1)]


def car_annihilation(t: CarElement | PauliElement, j: int) -> CarElement:
    """D′_j(Q′_A) = Q′_jQ′_A = (−1)^{#{i∈A: i<j}} Q′_{A∖{j}} for j ∈ A, 0 otherwise."""
    t = as_car(t)
    j = check_site(j, t.n)
    bit = 1 << (j - 1)
    masks = np.arange(1 << t.n, dtype=np.int64)
    has_j = (masks & bit) != 0
    signs = 1.0 - 2.0 * (_below_counts(t.n, j) & 1)
    out = np.zeros_like(t.alpha)
    out[masks[has_j] ^ bit] = t.alpha[has_j] * signs[has_j]
    return CarElement(t.n, out)


def car_creation(t: CarElement | PauliElement, j: int) -> CarElement:
    """D′*_j(Q′_B) = Q′_jQ′_B = (−1)^{#{i∈B: i<j}} Q′_{B∪{j}} for j ∉ B, 0 otherwise."""
    t = as_car(t)
    j = check_site(j, t.n)
    bit = 1 << (j - 1)
    masks = np.arange(1 << t.n, dtype=np.int64)
    lacks_j = (masks & bit) == 0
    signs = 1.0 - 2.0 * (_below_counts(t.n, j) & 1)
    out = np.zeros_like(t.alpha)
    out[masks[lacks_j] | bit] = t.alpha[lacks_j] * signs[lacks_j]
    return CarElement(t.n, out)


def car_number(t: CarElement | PauliElement, power: float = 1.0) -> CarElement:
    """N′^power: Q′_A ↦ |A|^power Q′_A, with Id ↦ 0."""
    t = as_car(t)
    if not power >= 0:
        raise InvalidInputError(f"`power` must be nonnegative, got {power!r}.")
    k = levels(t.n).astype(np.float64)
    factors = np.zeros_like(k)
    factors[k > 0] = k[k > 0] ** power
    return CarElement(t.n, t.alpha * factors)


def car_semigroup(t: CarElement | PauliElement, theta: float) -> CarElement:
    """cos^{N′}θ(T) = τ_n(T)·Id + Σ α_A cos^{|A|}θ Q′_A."""
    t = as_car(t)
    if not 0.0 <= theta <= HALF_PI:
        raise InvalidInputError(f"angle `theta` must be in [0, π/2], got {theta!r}.")
    k = levels(t.n)
    if theta == HALF_PI:
        factors = (k == 0).astype(np.float64)
    else:
        factors = math.cos(theta) ** k.astype(np.float64)
    return CarElement(t.n, t.alpha * factors)


def car_derivation(t: CarElement | PauliElement) -> PauliElement:
    """Σ_j P′_j D′_j(T)."""
    t = as_car(t)
    total = PauliElement.zero(t.n)
    for j in range(1, t.n + 1):
        total = total + pauli_mul(car_generator("P", j, t.n), car_annihilation(t, j).to_pauli())
    return total


def symmetrized_gradient(t: CarElement | PauliElement) -> DenseOperator:
    """|∇_s T| = (Σ_j |D′_j(T)*|² + |D′_j(T)|²)^{1/2} as a dense PSD matrix."""
    t = as_car(t)
    total = None
    for j in range(1, t.n + 1):
        d = car_annihilation(t, j).to_dense()
        term = d.conj().T @ d + d @ d.conj().T
        total = term if total is None else total + term
    return psd_sqrt(total)


def conditional_expectation_mn_prime(a: PauliElement) -> CarElement:
    """𝓔_{M′_n}: α_A = τ_n(Q′_A* a)."""
    table = car_word_table(a.n)
    alpha = np.zeros(1 << a.n, dtype=np.complex128)
    masks = table.lookup(a.words)
    inside = masks >= 0
    alpha[masks[inside]] = a.coeffs[inside] * np.conj(table.phases[masks[inside]])
    return CarElement(a.n, alpha)


def car_projection_pi_prime(a: PauliElement, j: int) -> PauliElement:
    """Π′_j: orthogonal projection onto span{P′_jQ′_A}."""
    table = pi_prime_table(a.n, check_site(j, a.n))
    return a.filter(table.lookup(a.words) >= 0)


def car_components(a: PauliElement, j: int) -> CarElement:
    """S_j = P′_jΠ′_j(S), an element of M′_n."""
    projected = car_projection_pi_prime(a, j)
    return CarElement.from_pauli(pauli_mul(car_generator("P", j, a.n), projected))


def car_sign_flip(a: PauliElement, j: int) -> PauliElement:
    """Conjugation by V_j = I⊗…⊗I⊗Q⊗U⊗…⊗U (Q at site j): negates P′_j and fixes the rest."""
    j = check_site(j, a.n)
    at_j = site_letters(a.words, j)
    parity = ((at_j == P_CODE) | (at_j == U_CODE)).astype(np.int64)
    for s in range(j + 1, a.n + 1):
        letters = site_letters(a.words, s)
        parity += (letters == Q_CODE) | (letters == P_CODE)
    return PauliElement(a.n, a.words, a.coeffs * (1.0 - 2.0 * (parity & 1)))


def car_identity(n: int) -> CarElement:
    return CarElement.from_pauli(identity_element(n))


def car_d_integral(
    t: CarElement | PauliElement, beta: float, j: int, tol: float = 1e-10
) -> CarElement:
    """P′_jΠ′_j ∫₀^{π/2} rotate(N′^β T, θ)(−log cos θ)^{β−1} dθ, which equals Γ(β)·D′_j(T).

    The rotation sends Q′_k to cos θ·Q′_k + sin θ·P′_k, so the fermionic orbit is the
    ordinary Pauli orbit of the Jordan–Wigner words.
    """
    t = as_car(t)
    if not beta > 0.5:
        raise InvalidInputError(f"`beta` must exceed ½, got {beta!r}.")
    j = check_site(j, t.n)
    orbit = RotationOrbit(car_number(t, beta).to_pauli())
    orbit = orbit.restrict(pi_prime_table(t.n, j).lookup(orbit.words) >= 0)
    integral = integrate_orbit(
        orbit,
        lambda theta: neg_log_cos(theta) ** (beta - 1.0),
        tol,
        left_order=max(0.0, 1.0 - 2 * beta),
    )
    return CarElement.from_pauli(pauli_mul(car_generator("P", j, t.n), integral))


def car_d_spectral(t: CarElement | PauliElement, beta: float, j: int) -> CarElement:
    """Γ(β)·D′_j(T) from the coefficient rule."""
    return car_annihilation(t, j) * float(special.gamma(beta))


__all__ = [
    "CarElement",
    "CarWordTable",
    "as_car",
    "car_annihilation",
    "car_components",
    "car_creation",
    "car_d_integral",
    "car_d_spectral",
    "car_derivation",
    "car_generator",
    "car_identity",
    "car_number",
    "car_projection_pi_prime",
    "car_semigroup",
    "car_sign_flip",
    "car_word_table",
    "conditional_expectation_mn_prime",
    "pi_prime_table",
    "symmetrized_gradient",
]
