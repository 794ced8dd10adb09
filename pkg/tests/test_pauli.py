import math

import numpy as np
import pytest

from poincare_cube.algebra.pauli import (
    PauliElement,
    conditional_expectation_mn,
    derivation,
    embed_function,
    extract_function,
    identity_element,
    label_of,
    p_b_q_a,
    pauli_d_operator,
    pauli_generator,
    pauli_mul,
    projection_pi,
    projection_pi_total,
    rotate,
    rotation_generator,
    sign_flip,
    trace,
    word_from_label,
)
from poincare_cube.cube import CubeFunction, d_operator
from poincare_cube.errors import InvalidDomainError, InvalidInputError


def _random_element(rng, n: int, terms: int = 12) -> PauliElement:
    words = rng.integers(0, 4**n, size=terms).astype(np.uint64)
    coeffs = rng.standard_normal(terms) + 1j * rng.standard_normal(terms)
    return PauliElement(n, words, coeffs)


class TestWords:
    def test_label_round_trip(self):
        word = word_from_label("QIP")
        assert label_of(word, 3) == "QIP"
        assert word == 1 | (2 << 4)

    def test_unknown_letter(self):
        with pytest.raises(InvalidInputError, match="unknown Pauli letter"):
            word_from_label("QX")

    def test_canonical_form_drops_cancelled_terms(self):
        a = PauliElement(2, [1, 1, 4], [1.0, -1.0, 2.0])
        assert a.terms() == {"IQ": 2.0}
        assert PauliElement.zero(2).num_terms == 0

    def test_word_beyond_site_count(self):
        with pytest.raises(InvalidInputError):
            PauliElement(1, [word_from_label("IQ")], [1.0])

    def test_from_labels_and_coefficient(self):
        a = PauliElement.from_labels({"QP": 2.0, "UI": -1j})
        assert a.coefficient("QP") == 2.0
        assert a.coefficient("UI") == -1j
        assert a.coefficient("II") == 0j
        with pytest.raises(InvalidInputError):
            PauliElement.from_labels({"Q": 1.0, "QQ": 1.0})


class TestProducts:
    def test_single_site_table(self):
        q, p, u = (pauli_generator(k, 1, 1) for k in ("Q", "P", "U"))
        assert pauli_mul(q, u).allclose(p * 1j)
        assert pauli_mul(u, p).allclose(q * 1j)
        assert pauli_mul(p, q).allclose(u * 1j)
        for g in (q, p, u):
            assert pauli_mul(g, g).allclose(identity_element(1))

    def test_distinct_letters_anticommute(self):
        q, p = pauli_generator("Q", 2, 3), pauli_generator("P", 2, 3)
        assert (pauli_mul(q, p) + pauli_mul(p, q)).num_terms == 0

    def test_different_sites_commute(self):
        a, b = pauli_generator("P", 1, 2), pauli_generator("U", 2, 2)
        assert pauli_mul(a, b).allclose(pauli_mul(b, a))

    def test_associativity(self, rng):
        a, b, c = (_random_element(rng, 3) for _ in range(3))
        assert ((a @ b) @ c).allclose(a @ (b @ c), atol=1e-10)

    def test_site_count_mismatch(self):
        with pytest.raises(InvalidInputError):
            pauli_generator("Q", 1, 1) @ pauli_generator("Q", 1, 2)

    def test_p_b_q_a(self):
        assert p_b_q_a([1], [2], 2).terms() == {"PQ": 1.0}
        # P_1 Q_1 = i U_1
        assert p_b_q_a([1], [1], 1).allclose(pauli_generator("U", 1, 1) * 1j)


class TestCommutativeSubalgebra:
    def test_embed_extract_round_trip(self, random_function):
        f = random_function(3)
        a = embed_function(f)
        assert a.is_in_mn()
        assert extract_function(a).allclose(f)
        assert trace(a) == pytest.approx(f.mean())

    def test_embedding_is_multiplicative(self, random_function):
        f, g = random_function(3), random_function(3)
        assert (embed_function(f) @ embed_function(g)).allclose(embed_function(f * g), atol=1e-10)

    def test_extract_outside_mn(self):
        with pytest.raises(InvalidDomainError):
            extract_function(pauli_generator("P", 1, 2))

    def test_conditional_expectation(self, random_function):
        f = random_function(2)
        mixed = embed_function(f) + PauliElement.from_labels({"PQ": 1.0, "IU": 2.0})
        assert conditional_expectation_mn(mixed).allclose(embed_function(f))

    def test_d_operator_matches_cube(self, random_function):
        f = random_function(3)
        assert pauli_d_operator(embed_function(f), 2).allclose(embed_function(d_operator(f, 2)))

    def test_derivation_of_walsh(self):
        t = embed_function(CubeFunction.walsh(2, [1, 2]))
        assert derivation(t).allclose(PauliElement.from_labels({"PQ": 1.0, "QP": 1.0}))

    def test_derivation_outside_mn(self):
        with pytest.raises(InvalidDomainError):
            derivation(pauli_generator("U", 1, 1))


class TestRotation:
    def test_rotate_generator(self):
        theta = 0.3
        q, p = pauli_generator("Q", 1, 2), pauli_generator("P", 1, 2)
        assert rotate(q, theta).allclose(q * math.cos(theta) + p * math.sin(theta))
        assert rotate(p, theta).allclose(p * math.cos(theta) - q * math.sin(theta))

    def test_quarter_turn(self):
        t = embed_function(CubeFunction.walsh(2, [1, 2]))
        assert rotate(t, 0.5 * math.pi).allclose(PauliElement.from_labels({"PP": 1.0}))

    def test_u_letters_are_fixed(self):
        u = pauli_generator("U", 1, 1)
        assert rotate(u, 1.1).allclose(u)

    def test_partial_rotation(self):
        t = PauliElement.from_labels({"QQ": 1.0})
        assert rotate(t, 0.5 * math.pi, sites=[2]).allclose(PauliElement.from_labels({"QP": 1.0}))

    def test_rotation_is_an_automorphism(self, rng):
        a, b = _random_element(rng, 2, 6), _random_element(rng, 2, 6)
        theta = 0.8
        assert rotate(a @ b, theta).allclose(rotate(a, theta) @ rotate(b, theta), atol=1e-10)

    def test_generator_is_the_derivative(self, rng):
        a = _random_element(rng, 3, 8)
        h = 1e-5
        slope = (rotate(a, h) - rotate(a, -h)) * (0.5 / h)
        assert slope.allclose(rotation_generator(a), atol=1e-7)

    def test_generator_extends_derivation(self, random_function):
        t = embed_function(random_function(3))
        assert rotation_generator(t).allclose(derivation(t), atol=1e-12)


class TestProjections:
    def test_projection_pi(self):
        a = PauliElement.from_labels({"PQ": 1.0, "PP": 2.0, "UI": 3.0, "QP": 4.0})
        assert projection_pi(a, 1).terms() == {"PQ": 1.0}
        assert projection_pi_total(a).terms() == {"PQ": 1.0, "QP": 4.0}

    def test_sign_flip(self):
        a = PauliElement.from_labels({"PI": 1.0, "QP": 1.0, "UQ": 1.0})
        flipped = sign_flip(a, [-1, 1])
        assert flipped.terms() == {"PI": -1.0, "QP": 1.0, "UQ": -1.0}

    def test_sign_flip_validation(self):
        with pytest.raises(InvalidInputError):
            sign_flip(pauli_generator("Q", 1, 2), [1])
        with pytest.raises(InvalidInputError):
            sign_flip(pauli_generator("Q", 1, 1), [0])
