"""Sparse Pauli-word arithmetic for the matrix algebra M_{2^n}.

Every element is a finite sum of words over the single-site basis {I, Q, P, U} with
Q = [[0, 1], [1, 0]], P = [[0, i], [−i, 0]], U = diag(1, −1). A word is packed into
a uint64 with two bits per site (I=0, Q=1, P=2, U=3), site j in bits 2(j−1) and
2(j−1)+1. With this packing the letter of a product is the XOR of the letters;
only the phase needs a table. Words whose high bits are all clear use only I and
Q, i.e. they span the commutative subalgebra M_n = embed(L^∞(Ω_n)).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from functools import cache
from numbers import Number
from typing import Any, Literal

import numpy as np
import numpy.typing as npt
from scipy import sparse

from ..config.defaults import LIMITS
from ..cube import CubeFunction
from ..errors import BudgetExceededError, InvalidDomainError, InvalidInputError

MAX_SITES = 32
LETTERS = "IQPU"
LETTER_CODES = {letter: code for code, letter in enumerate(LETTERS)}
I_CODE, Q_CODE, P_CODE, U_CODE = 0, 1, 2, 3

Letter = Literal["Q", "P", "U"]
WordArray = npt.NDArray[np.uint64]

# exponent of i picked up at one site, indexed [left letter, right letter];
# Q → U → P → Q is the +i direction (QU = iP, UP = iQ, PQ = iU)
_PHASE_EXPONENT = np.array(
    [
        [0, 0, 0, 0],
        [0, 0, 3, 1],
        [0, 1, 0, 3],
        [0, 3, 1, 0],
    ],
    dtype=np.int64,
)
_PHASES = np.array([1.0, 1.0j, -1.0, -1.0j], dtype=np.complex128)
# pair products per chunk in pauli_mul
_PAIR_CHUNK = 1 << 20


def check_sites(n: int) -> int:
    if not isinstance(n, int | np.integer) or not 1 <= int(n) <= MAX_SITES:
        raise InvalidInputError(f"site count `n` must be in [1, {MAX_SITES}], got {n!r}.")
    return int(n)


def check_site(j: int, n: int) -> int:
    if not isinstance(j, int | np.integer) or not 1 <= int(j) <= n:
        raise InvalidInputError(f"site `j` must be in [1, {n}], got {j!r}.")
    return int(j)


def site_shift(j: int) -> int:
    return 2 * (j - 1)


@cache
def high_mask(n: int) -> int:
    """Bits that are set exactly when some site carries P or U."""
    return sum(2 << site_shift(j) for j in range(1, n + 1))


def site_letters(words: WordArray, j: int) -> npt.NDArray[np.intp]:
    return ((words >> site_shift(j)) & 3).astype(np.intp)


def word_from_label(label: str) -> int:
    """Pack a label such as ``"QIP"`` (site 1 first) into a word."""
    word = 0
    for j, letter in enumerate(label.upper(), start=1):
        if letter not in LETTER_CODES:
            raise InvalidInputError(f"unknown Pauli letter {letter!r} in {label!r}.")
        word |= LETTER_CODES[letter] << site_shift(j)
    return word


def label_of(word: int, n: int) -> str:
    return "".join(LETTERS[(int(word) >> site_shift(j)) & 3] for j in range(1, n + 1))


def spread_mask(masks: npt.ArrayLike, n: int, code: int = Q_CODE) -> WordArray:
    """Map subset masks A to the words carrying ``code`` on every site of A."""
    masks = np.asarray(masks, dtype=np.uint64)
    out = np.zeros(masks.shape, dtype=np.uint64)
    for j in range(1, n + 1):
        out |= ((masks >> (j - 1)) & 1) * np.uint64(code) << site_shift(j)
    return out


def compress_mask(words: WordArray, n: int) -> npt.NDArray[np.int64]:
    """Inverse of :func:`spread_mask`: the set of sites with a non-identity letter."""
    out = np.zeros(words.shape, dtype=np.int64)
    for j in range(1, n + 1):
        out |= (site_letters(words, j) != I_CODE).astype(np.int64) << (j - 1)
    return out


def _canonical(
    words: npt.ArrayLike, coeffs: npt.ArrayLike
) -> tuple[WordArray, npt.NDArray[np.complex128]]:
    w = np.asarray(words, dtype=np.uint64).ravel()
    c = np.asarray(coeffs, dtype=np.complex128).ravel()
    if w.shape != c.shape:
        raise InvalidInputError(f"{w.size} words but {c.size} coefficients.")
    if w.size == 0:
        return w, c
    unique, inverse = np.unique(w, return_inverse=True)
    summed = np.zeros(unique.size, dtype=np.complex128)
    np.add.at(summed, inverse.ravel(), c)
    keep = summed != 0
    return unique[keep], summed[keep]


class PauliElement:
    """An element Σ c_w·w of M_{2^n} in canonical form.

    Words are sorted and unique and no coefficient is exactly zero, so two elements
    are equal iff their arrays are. Instances are immutable.
    """

    __slots__ = ("coeffs", "n", "words")
    __array_ufunc__ = None

    def __init__(self, n: int, words: npt.ArrayLike, coeffs: npt.ArrayLike) -> None:
        self.n = check_sites(n)
        w, c = _canonical(words, coeffs)
        if w.size and int(w[-1]) >> (2 * self.n):
            raise InvalidInputError(f"word {int(w[-1]):#x} has letters beyond site {self.n}.")
        if w.size > LIMITS.pauli_max_terms:
            raise BudgetExceededError(
                f"element has {w.size} terms; the budget is {LIMITS.pauli_max_terms}."
            )
        w.setflags(write=False)
        c.setflags(write=False)
        self.words: WordArray = w
        self.coeffs: npt.NDArray[np.complex128] = c

    @classmethod
    def zero(cls, n: int) -> PauliElement:
        return cls(n, np.zeros(0, dtype=np.uint64), np.zeros(0, dtype=np.complex128))

    @classmethod
    def basis(cls, n: int, word: int, coeff: complex = 1.0) -> PauliElement:
        return cls(n, [word], [coeff])

    @classmethod
    def from_labels(cls, terms: Mapping[str, complex]) -> PauliElement:
        """Build from ``{"QIP": 1.0, ...}``; every label must have the same length."""
        lengths = {len(label) for label in terms}
        if len(lengths) != 1:
            raise InvalidInputError("labels must be nonempty and of equal length.")
        n = lengths.pop()
        return cls(n, [word_from_label(label) for label in terms], list(terms.values()))

    @property
    def num_terms(self) -> int:
        return int(self.words.size)

    def __len__(self) -> int:
        return self.num_terms

    def terms(self) -> dict[str, complex]:
        return {label_of(w, self.n): complex(c) for w, c in zip(self.words, self.coeffs)}

    def coefficient(self, word: int | str) -> complex:
        key = word_from_label(word) if isinstance(word, str) else int(word)
        pos = int(np.searchsorted(self.words, np.uint64(key)))
        if pos < self.words.size and int(self.words[pos]) == key:
            return complex(self.coeffs[pos])
        return 0j

    def adjoint(self) -> PauliElement:
        # every basis word is Hermitian
        return PauliElement(self.n, self.words, np.conj(self.coeffs))

    def is_in_mn(self) -> bool:
        return not np.any(self.words & np.uint64(high_mask(self.n)))

    def filter(self, keep: npt.NDArray[np.bool_]) -> PauliElement:
        return PauliElement(self.n, self.words[keep], self.coeffs[keep])

    def pruned(self, atol: float) -> PauliElement:
        return self.filter(np.abs(self.coeffs) > atol)

    def max_abs_diff(self, other: PauliElement) -> float:
        diff = self - other
        return float(np.abs(diff.coeffs).max(initial=0.0))

    def allclose(self, other: PauliElement, atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    def _check_same_sites(self, other: PauliElement) -> None:
        if other.n != self.n:
            raise InvalidInputError(f"site-count mismatch: {self.n} vs {other.n}.")

    def __add__(self, other: Any) -> PauliElement:
        if isinstance(other, Number):
            other = identity_element(self.n) * other
        if not isinstance(other, PauliElement):
            return NotImplemented
        self._check_same_sites(other)
        return PauliElement(
            self.n,
            np.concatenate([self.words, other.words]),
            np.concatenate([self.coeffs, other.coeffs]),
        )

    __radd__ = __add__

    def __neg__(self) -> PauliElement:
        return PauliElement(self.n, self.words, -self.coeffs)

    def __sub__(self, other: Any) -> PauliElement:
        if isinstance(other, Number | PauliElement):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: Any) -> PauliElement:
        return (-self) + other

    def __mul__(self, other: Any) -> PauliElement:
        if not isinstance(other, Number):
            return NotImplemented
        return PauliElement(self.n, self.words, self.coeffs * complex(other))

    __rmul__ = __mul__

    def __matmul__(self, other: Any) -> PauliElement:
        if not isinstance(other, PauliElement):
            return NotImplemented
        return pauli_mul(self, other)

    def __repr__(self) -> str:
        return f"PauliElement(n={self.n}, terms={self.num_terms})"


def identity_element(n: int) -> PauliElement:
    return PauliElement.basis(n, 0)


def pauli_generator(kind: Letter, j: int, n: int) -> PauliElement:
    """Q_j, P_j or U_j: the letter ``kind`` at site j and I elsewhere."""
    n = check_sites(n)
    if kind not in ("Q", "P", "U"):
        raise InvalidInputError(f"`kind` must be one of Q, P, U, got {kind!r}.")
    return PauliElement.basis(n, LETTER_CODES[kind] << site_shift(check_site(j, n)))


def pauli_mul(a: PauliElement, b: PauliElement) -> PauliElement:
    """The product a·b, expanded over all pairs of terms and re-canonicalized."""
    a._check_same_sites(b)
    if not a.num_terms or not b.num_terms:
        return PauliElement.zero(a.n)
    rows = max(1, _PAIR_CHUNK // b.num_terms)
    right_letters = [site_letters(b.words, j)[None, :] for j in range(1, a.n + 1)]
    words: list[np.ndarray] = []
    coeffs: list[np.ndarray] = []
    for start in range(0, a.num_terms, rows):
        left = a.words[start : start + rows, None]
        exponent = np.zeros((left.shape[0], b.num_terms), dtype=np.int64)
        for j in range(1, a.n + 1):
            exponent += _PHASE_EXPONENT[site_letters(left, j), right_letters[j - 1]]
        product = a.coeffs[start : start + rows, None] * b.coeffs[None, :] * _PHASES[exponent & 3]
        words.append((left ^ b.words[None, :]).ravel())
        coeffs.append(product.ravel())
    return PauliElement(a.n, np.concatenate(words), np.concatenate(coeffs))


def p_b_q_a(b_sites: Iterable[int], a_sites: Iterable[int], n: int) -> PauliElement:
    """The basis operator P_B Q_A."""
    left = identity_element(n)
    for j in sorted(set(b_sites)):
        left = pauli_mul(left, pauli_generator("P", j, n))
    right = identity_element(n)
    for j in sorted(set(a_sites)):
        right = pauli_mul(right, pauli_generator("Q", j, n))
    return pauli_mul(left, right)


def embed_function(f: CubeFunction) -> PauliElement:
    """I_n(f) = Σ_A f̂(A) Q_A."""
    masks = np.arange(f.size, dtype=np.uint64)
    return PauliElement(f.n, spread_mask(masks, f.n), f.coeffs)


def extract_function(a: PauliElement) -> CubeFunction:
    """The inverse of :func:`embed_function` on M_n."""
    _require_mn(a, "extract_function")
    coeffs = np.zeros(1 << a.n, dtype=np.complex128)
    coeffs[compress_mask(a.words, a.n)] = a.coeffs
    return CubeFunction(a.n, coeffs=coeffs)


def trace(a: PauliElement) -> complex:
    """τ_n(a): the coefficient of the identity word."""
    return a.coefficient(0)


def _require_mn(a: PauliElement, operation: str) -> None:
    if not a.is_in_mn():
        raise InvalidDomainError(f"{operation} is only defined on M_n (I/Q letters).")


def conditional_expectation_mn(a: PauliElement) -> PauliElement:
    """𝓔_{M_n}: drop every word containing a P or U letter."""
    return a.filter((a.words & np.uint64(high_mask(a.n))) == 0)


def pauli_d_operator(a: PauliElement, j: int) -> PauliElement:
    """D_j on M_n: Q_A ↦ Q_{A∖{j}} for j ∈ A, 0 otherwise."""
    _require_mn(a, "D_j")
    j = check_site(j, a.n)
    has_q = site_letters(a.words, j) == Q_CODE
    cleared = a.words[has_q] & ~np.uint64(3 << site_shift(j))
    return PauliElement(a.n, cleared, a.coeffs[has_q])


def derivation(a: PauliElement) -> PauliElement:
    """𝓓(T) = Σ_j P_j D_j(T) for T ∈ M_n."""
    _require_mn(a, "the derivation 𝓓")
    total = PauliElement.zero(a.n)
    for j in range(1, a.n + 1):
        total = total + pauli_mul(pauli_generator("P", j, a.n), pauli_d_operator(a, j))
    return total


def _site_list(sites: Iterable[int] | None, n: int) -> list[int]:
    if sites is None:
        return list(range(1, n + 1))
    return sorted({check_site(j, n) for j in sites})


def rotation_generator(a: PauliElement, sites: Iterable[int] | None = None) -> PauliElement:
    """d/dθ rotate(a, θ) at θ = 0, on the whole of M_{2^n}: Q ↦ P, P ↦ −Q per site."""
    words: list[np.ndarray] = []
    coeffs: list[np.ndarray] = []
    for j in _site_list(sites, a.n):
        letters = site_letters(a.words, j)
        moving = (letters == Q_CODE) | (letters == P_CODE)
        sign = np.where(letters[moving] == Q_CODE, 1.0, -1.0)
        words.append(a.words[moving] ^ np.uint64(3 << site_shift(j)))
        coeffs.append(a.coeffs[moving] * sign)
    if not words:
        return PauliElement.zero(a.n)
    return PauliElement(a.n, np.concatenate(words), np.concatenate(coeffs))


class RotationOrbit:
    """θ ↦ rotate(a, θ) as a fixed set of words with trigonometric coefficients.

    Expanding Q ↦ cos θ·Q + sin θ·P and P ↦ −sin θ·Q + cos θ·P over the rotated sites
    turns every term into products c·cos^k θ·sin^m θ. The expansion is built once so
    the coefficients can be evaluated on a whole vector of angles, which is what the
    quadrature routines need.
    """

    def __init__(self, a: PauliElement, sites: Iterable[int] | None = None) -> None:
        self.n = a.n
        words = a.words.copy()
        coeffs = a.coeffs.copy()
        cos_power = np.zeros(words.size, dtype=np.int64)
        sin_power = np.zeros(words.size, dtype=np.int64)
        for j in _site_list(sites, a.n):
            letters = site_letters(words, j)
            moving = (letters == Q_CODE) | (letters == P_CODE)
            if not moving.any():
                continue
            sign = np.where(letters[moving] == Q_CODE, 1.0, -1.0)
            cos_power[moving] += 1
            words = np.concatenate([words, words[moving] ^ np.uint64(3 << site_shift(j))])
            coeffs = np.concatenate([coeffs, coeffs[moving] * sign])
            sin_power = np.concatenate([sin_power, sin_power[moving] + 1])
            cos_power = np.concatenate([cos_power, cos_power[moving] - 1])
        self._set_terms(words, coeffs, cos_power, sin_power)

    def _set_terms(
        self,
        words: WordArray,
        coeffs: npt.NDArray[np.complex128],
        cos_power: npt.NDArray[np.int64],
        sin_power: npt.NDArray[np.int64],
    ) -> None:
        self.words, inverse = np.unique(words, return_inverse=True)
        self._coeffs = coeffs
        self._cos_power = cos_power.astype(np.float64)
        self._sin_power = sin_power.astype(np.float64)
        self._aggregate = sparse.csr_array(
            (np.ones(words.size), (inverse.ravel(), np.arange(words.size))),
            shape=(self.words.size, words.size),
        )
        self._term_words = words

    def restrict(self, keep: npt.NDArray[np.bool_]) -> RotationOrbit:
        """The orbit followed by the projection onto the words selected by ``keep``."""
        selected = np.isin(self._term_words, self.words[keep])
        out = object.__new__(RotationOrbit)
        out.n = self.n
        out._set_terms(
            self._term_words[selected],
            self._coeffs[selected],
            self._cos_power[selected].astype(np.int64),
            self._sin_power[selected].astype(np.int64),
        )
        return out

    def coefficients(self, theta: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """Coefficient matrix of shape (len(theta), len(words))."""
        theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
        with np.errstate(under="ignore"):
            c = np.cos(theta)[:, None] ** self._cos_power[None, :]
            s = np.sin(theta)[:, None] ** self._sin_power[None, :]
        values = self._coeffs[None, :] * c * s
        return np.asarray((self._aggregate @ values.T).T)

    def at(self, theta: float) -> PauliElement:
        return PauliElement(self.n, self.words, self.coefficients([theta])[0])


def rotate(a: PauliElement, theta: float, sites: Iterable[int] | None = None) -> PauliElement:
    """e^{θ𝓓}(a) = 𝓡_θ* a 𝓡_θ, restricted to ``sites`` when given."""
    return RotationOrbit(a, sites).at(theta)


def pi_range_mask(words: WordArray, n: int, j: int) -> npt.NDArray[np.bool_]:
    """Words in the range of Π_j: P at site j, I or Q elsewhere."""
    elsewhere = np.uint64(high_mask(n) & ~(3 << site_shift(j)))
    return (site_letters(words, j) == P_CODE) & ((words & elsewhere) == 0)


def projection_pi(a: PauliElement, j: int) -> PauliElement:
    """Π_j, the orthogonal projection onto P_j·M_n."""
    return a.filter(pi_range_mask(a.words, a.n, check_site(j, a.n)))


def projection_pi_total(a: PauliElement) -> PauliElement:
    """Π = Σ_j Π_j."""
    total = PauliElement.zero(a.n)
    for j in range(1, a.n + 1):
        total = total + projection_pi(a, j)
    return total


def sign_flip(a: PauliElement, signs: Sequence[int]) -> PauliElement:
    """Conjugation by Q_{A_ε}, A_ε = {i : ε_i = −1}: P_j ↦ ε_j P_j, M_n fixed."""
    if len(signs) != a.n or any(s not in (-1, 1) for s in signs):
        raise InvalidInputError(f"`signs` must be {a.n} entries from {{−1, +1}}, got {signs!r}.")
    flipped = sum(2 << site_shift(j) for j, s in enumerate(signs, start=1) if s == -1)
    parity = np.bitwise_count(a.words & np.uint64(flipped)) & 1
    return PauliElement(a.n, a.words, a.coeffs * (1.0 - 2.0 * parity))


__all__ = [
    "LETTERS",
    "MAX_SITES",
    "PauliElement",
    "RotationOrbit",
    "compress_mask",
    "conditional_expectation_mn",
    "derivation",
    "embed_function",
    "extract_function",
    "high_mask",
    "identity_element",
    "label_of",
    "p_b_q_a",
    "pauli_d_operator",
    "pauli_generator",
    "pauli_mul",
    "pi_range_mask",
    "projection_pi",
    "projection_pi_total",
    "rotate",
    "rotation_generator",
    "sign_flip",
    "site_letters",
    "spread_mask",
    "trace",
    "word_from_label",
]
