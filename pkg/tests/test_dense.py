import numpy as np
import pytest

from poincare_cube.algebra.dense import (
    averaging_h,
    check_operator,
    conditional_expectation_dense,
    from_dense,
    identity_dense,
    rotate_dense,
    to_dense,
    vn_conjugation,
)
from poincare_cube.algebra.pauli import (
    PauliElement,
    conditional_expectation_mn,
    embed_function,
    identity_element,
    pauli_generator,
    rotate,
)
from poincare_cube.errors import BudgetExceededError, InvalidInputError
from poincare_cube.norms import FunctionSpace, function_norm, parse_space, schatten_norm


def _random_element(rng, n: int, terms: int = 10) -> PauliElement:
    words = rng.integers(0, 4**n, size=terms).astype(np.uint64)
    coeffs = rng.standard_normal(terms) + 1j * rng.standard_normal(terms)
    return PauliElement(n, words, coeffs)


class TestConversion:
    def test_single_site_matrices(self):
        assert np.allclose(to_dense(pauli_generator("Q", 1, 1)), [[0, 1], [1, 0]])
        assert np.allclose(to_dense(pauli_generator("P", 1, 1)), [[0, 1j], [-1j, 0]])
        assert np.allclose(to_dense(pauli_generator("U", 1, 1)), [[1, 0], [0, -1]])

    def test_site_one_is_the_leading_factor(self):
        u1 = to_dense(pauli_generator("U", 1, 2))
        assert np.allclose(np.diag(u1), [1, 1, -1, -1])

    def test_products_match_matrix_products(self, rng):
        a, b = _random_element(rng, 3), _random_element(rng, 3)
        assert np.allclose(to_dense(a @ b), to_dense(a) @ to_dense(b), atol=1e-10)

    def test_from_dense_inverts_to_dense(self, rng):
        a = _random_element(rng, 3)
        assert from_dense(to_dense(a)).allclose(a, atol=1e-10)

    def test_from_dense_of_arbitrary_matrix(self, rng):
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert np.allclose(to_dense(from_dense(m)), m, atol=1e-10)

    def test_identity(self):
        assert np.allclose(to_dense(identity_element(2)), identity_dense(2))


class TestValidation:
    @pytest.mark.parametrize("shape", [(3, 3), (2, 4), (1, 1)])
    def test_bad_shapes(self, shape):
        with pytest.raises(InvalidInputError):
            check_operator(np.zeros(shape))

    def test_dense_budget(self):
        with pytest.raises(BudgetExceededError):
            to_dense(identity_element(9))


class TestConditionalExpectation:
    def test_vn_diagonalizes_mn(self, random_function):
        m = vn_conjugation(to_dense(embed_function(random_function(3))))
        assert np.allclose(m, np.diag(np.diag(m)), atol=1e-10)

    def test_vn_inverse(self, rng):
        m = rng.standard_normal((4, 4))
        assert np.allclose(vn_conjugation(vn_conjugation(m), inverse=True), m, atol=1e-12)

    def test_averaging_is_idempotent(self, rng):
        m = rng.standard_normal((4, 4))
        once = averaging_h(m, 2)
        assert np.allclose(averaging_h(once, 2), once)

    def test_matches_pauli_filter(self, rng):
        a = _random_element(rng, 3, 20)
        expected = to_dense(conditional_expectation_mn(a))
        assert np.allclose(conditional_expectation_dense(to_dense(a)), expected, atol=1e-10)


class TestRotation:
    @pytest.mark.parametrize("sites", [None, [2]])
    def test_matches_pauli_rotation(self, rng, sites):
        a = _random_element(rng, 3)
        expected = to_dense(rotate(a, 0.7, sites))
        assert np.allclose(rotate_dense(to_dense(a), 0.7, sites), expected, atol=1e-10)


class TestSchattenOfEmbedding:
    @pytest.mark.parametrize("space", ["lp:1", "lp:3", "linf", "orlicz"])
    def test_embedding_preserves_norms(self, random_function, space):
        f = random_function(3)
        sp: FunctionSpace = parse_space(space)
        norm = schatten_norm(to_dense(embed_function(f)), sp)
        assert norm == pytest.approx(function_norm(f, sp), rel=1e-9)
