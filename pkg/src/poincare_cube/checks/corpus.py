"""Random ensembles and deterministic corpora fed to the theorem checks.

Trial ``i`` of a run with seed ``s`` always draws from ``default_rng([s, i])``, so a
trial's input does not depend on how many trials run or on which thread runs it.
"""

from __future__ import annotations

import math
from typing import Any, Literal

import numpy as np

from ..algebra.car import CarElement, car_identity
from ..algebra.dense import DenseOperator
from ..algebra.pauli import PauliElement, label_of
from ..cube import CubeFunction, levels, mask_to_subset, riesz_product

Ensemble = Literal["flat", "decaying", "level"]
ENSEMBLES: tuple[Ensemble, ...] = ("flat", "decaying", "level")

# separate streams for draws that are not tied to a trial index
SUBSET_STREAM = 1


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def stream_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def _gaussian(rng: np.random.Generator, size: int, real: bool) -> np.ndarray:
    if real:
        return rng.standard_normal(size)
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2.0)


def random_function(
    rng: np.random.Generator,
    n: int,
    ensemble: Ensemble = "flat",
    *,
    real: bool = False,
    mean_zero: bool = False,
) -> CubeFunction:
    """Gaussian Walsh coefficients with a level profile.

    ``flat`` weights every level equally, ``decaying`` scales level k by 1/k and
    ``level`` keeps a single random level k ≥ 1.
    """
    k = levels(n)
    coeffs = _gaussian(rng, 1 << n, real)
    if ensemble == "decaying":
        coeffs = coeffs / np.maximum(k, 1)
    elif ensemble == "level":
        chosen = int(rng.integers(1, n + 1))
        coeffs = np.where(k == chosen, coeffs, 0.0)
    if mean_zero:
        coeffs[0] = 0.0
    return CubeFunction(n, coeffs=coeffs)


def trial_function(
    seed: int, index: int, n: int, *, real: bool = False, mean_zero: bool = False
) -> tuple[str, CubeFunction]:
    """The random input of trial ``index``; ensembles cycle with the index."""
    ensemble = ENSEMBLES[index % len(ENSEMBLES)]
    f = random_function(trial_rng(seed, index), n, ensemble, real=real, mean_zero=mean_zero)
    return f"random[{index}] ({ensemble})", f


def cube_corpus(n: int) -> list[tuple[str, CubeFunction]]:
    """Known extremals and structured functions, all real-valued.

    Walsh functions of every level, the normalized level-1 sum, the Riesz product,
    the normalized Hamming weight, a coordinate indicator and a constant.
    """
    corpus = [(f"walsh{{1..{k}}}", CubeFunction.walsh(n, range(1, k + 1))) for k in range(1, n + 1)]
    level_one = np.zeros(1 << n, dtype=np.complex128)
    level_one[[1 << j for j in range(n)]] = 1.0
    corpus.append(("level-1 sum", CubeFunction(n, coeffs=level_one / math.sqrt(n))))
    corpus.append(("hamming weight", CubeFunction(n, coeffs=level_one / n)))
    corpus.append((f"riesz product f_{n}", riesz_product(n)))
    indicator = CubeFunction.constant(n, 0.5) + CubeFunction.walsh(n, [1]) * 0.5
    corpus.append(("indicator {x_1 = 1}", indicator))
    corpus.append(("constant", CubeFunction.constant(n, 1.0)))
    return corpus


def hamming_weight(n: int) -> CubeFunction:
    """Σ_j ω_j / n."""
    coeffs = np.zeros(1 << n, dtype=np.complex128)
    coeffs[[1 << j for j in range(n)]] = 1.0 / n
    return CubeFunction(n, coeffs=coeffs)


def random_car_element(
    rng: np.random.Generator, n: int, *, hermitian: bool = False
) -> CarElement:
    """Gaussian Q′-coefficients; the Hermitian part when ``hermitian`` is set."""
    t = CarElement(n, _gaussian(rng, 1 << n, real=False))
    if hermitian:
        t = (t + t.adjoint()) * 0.5
    return t


def car_corpus(n: int) -> list[tuple[str, CarElement]]:
    corpus = [
        (f"Q′_{{1..{k}}}", CarElement.basis(n, range(1, k + 1))) for k in range(1, n + 1)
    ]
    linear = np.zeros(1 << n, dtype=np.complex128)
    linear[[1 << j for j in range(n)]] = np.arange(1, n + 1) / n
    corpus.append(("Σ_j (j/n) Q′_j", CarElement(n, linear)))
    corpus.append(("identity", car_identity(n)))
    return corpus


def random_dense(rng: np.random.Generator, n: int) -> DenseOperator:
    """A complex Gaussian 2^n × 2^n matrix."""
    dim = 1 << n
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2.0)


def random_pauli_element(
    rng: np.random.Generator, n: int, terms: int
) -> PauliElement:
    """``terms`` distinct random words with Gaussian coefficients."""
    total = 4**n
    words = rng.choice(total, size=min(terms, total), replace=False).astype(np.uint64)
    return PauliElement(n, words, _gaussian(rng, words.size, real=False))


def describe_function(f: CubeFunction) -> dict[str, Any]:
    """JSON-ready Walsh coefficients; exact zeros are dropped."""
    nonzero = np.flatnonzero(f.coeffs)
    return {
        "kind": "cube_function",
        "n": f.n,
        "coeffs": {
            ",".join(map(str, mask_to_subset(int(m)))) or "∅": [
                float(f.coeffs[m].real),
                float(f.coeffs[m].imag),
            ]
            for m in nonzero
        },
    }


def describe_car(t: CarElement) -> dict[str, Any]:
    nonzero = np.flatnonzero(t.alpha)
    return {
        "kind": "car_element",
        "n": t.n,
        "alpha": {
            ",".join(map(str, mask_to_subset(int(m)))) or "∅": [
                float(t.alpha[m].real),
                float(t.alpha[m].imag),
            ]
            for m in nonzero
        },
    }


def describe_pauli(a: PauliElement) -> dict[str, Any]:
    return {
        "kind": "pauli_element",
        "n": a.n,
        "terms": {
            label_of(w, a.n): [float(c.real), float(c.imag)] for w, c in zip(a.words, a.coeffs)
        },
    }


__all__ = [
    "ENSEMBLES",
    "Ensemble",
    "car_corpus",
    "cube_corpus",
    "describe_car",
    "describe_function",
    "describe_pauli",
    "hamming_weight",
    "random_car_element",
    "random_dense",
    "random_function",
    "random_pauli_element",
    "stream_rng",
    "trial_function",
    "trial_rng",
]
