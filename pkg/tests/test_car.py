import math

import numpy as np
import pytest
from scipy import special

from poincare_cube.algebra.car import (
    CarElement,
    car_annihilation,
    car_components,
    car_creation,
    car_d_integral,
    car_d_spectral,
    car_derivation,
    car_generator,
    car_identity,
    car_number,
    car_projection_pi_prime,
    car_semigroup,
    car_sign_flip,
    conditional_expectation_mn_prime,
    symmetrized_gradient,
)
from poincare_cube.algebra.pauli import PauliElement, identity_element, pauli_mul
from poincare_cube.errors import InvalidDomainError, InvalidInputError


def _random_car(rng, n: int) -> CarElement:
    return CarElement(n, rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n))


def _anticommutator(a: PauliElement, b: PauliElement) -> PauliElement:
    return pauli_mul(a, b) + pauli_mul(b, a)


class TestGenerators:
    @pytest.mark.parametrize("n", [1, 3])
    def test_canonical_anticommutation(self, n):
        ident = identity_element(n)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                qi, qj = car_generator("Q", i, n), car_generator("Q", j, n)
                pi, pj = car_generator("P", i, n), car_generator("P", j, n)
                expected = ident * 2.0 if i == j else PauliElement.zero(n)
                assert _anticommutator(qi, qj).allclose(expected)
                assert _anticommutator(pi, pj).allclose(expected)
                assert _anticommutator(qi, pj).num_terms == 0

    def test_jordan_wigner_words(self):
        assert car_generator("Q", 3, 3).terms() == {"UUQ": 1.0}
        assert car_generator("P", 2, 3).terms() == {"UPI": 1.0}

    def test_bad_kind(self):
        with pytest.raises(InvalidInputError):
            car_generator("U", 1, 2)  # type: ignore[arg-type]


class TestCarElement:
    def test_basis_is_ordered_product(self):
        q1, q3 = car_generator("Q", 1, 3), car_generator("Q", 3, 3)
        assert CarElement.basis(3, [1, 3]).to_pauli().allclose(pauli_mul(q1, q3))

    def test_pauli_round_trip(self, rng):
        t = _random_car(rng, 3)
        assert CarElement.from_pauli(t.to_pauli()).allclose(t)

    def test_from_pauli_outside_span(self):
        with pytest.raises(InvalidDomainError):
            CarElement.from_pauli(PauliElement.from_labels({"IQ": 1.0}))

    def test_adjoint_reverses_order(self):
        t = CarElement.basis(2, [1, 2])
        assert t.adjoint().allclose(-t)
        assert CarElement.basis(2, [2]).adjoint().allclose(CarElement.basis(2, [2]))

    def test_wrong_length(self):
        with pytest.raises(InvalidInputError):
            CarElement(2, np.ones(3))

    def test_identity(self):
        assert car_identity(3).trace() == 1.0
        assert car_identity(3).to_pauli().allclose(identity_element(3))


class TestLadderOperators:
    def test_annihilation_is_left_multiplication(self):
        n = 3
        for mask in range(1, 1 << n):
            subset = [j + 1 for j in range(n) if mask >> j & 1]
            t = CarElement.basis(n, subset)
            for j in subset:
                left = pauli_mul(car_generator("Q", j, n), t.to_pauli())
                assert car_annihilation(t, j).allclose(CarElement.from_pauli(left))

    def test_annihilation_kills_missing_site(self):
        t = CarElement.basis(3, [1, 3])
        assert np.count_nonzero(car_annihilation(t, 2).alpha) == 0

    def test_ladder_relation(self, rng):
        # D′_j D′*_j + D′*_j D′_j = Id on M′_n
        t = _random_car(rng, 3)
        for j in (1, 2, 3):
            total = car_annihilation(car_creation(t, j), j) + car_creation(car_annihilation(t, j), j)
            assert total.allclose(t)

    def test_annihilation_squares_to_zero(self, rng):
        t = _random_car(rng, 3)
        twice = car_annihilation(car_annihilation(t, 2), 2)
        assert np.count_nonzero(twice.alpha) == 0


class TestSpectralCalculus:
    def test_number_operator(self):
        t = CarElement.basis(3, [1, 2]) + CarElement.basis(3, [])
        assert car_number(t, 0.5).allclose(CarElement.basis(3, [1, 2], math.sqrt(2.0)))

    def test_semigroup_endpoints(self, rng):
        t = _random_car(rng, 3)
        assert car_semigroup(t, 0.0).allclose(t)
        assert car_semigroup(t, 0.5 * math.pi).allclose(CarElement.basis(3, [], t.trace()))
        with pytest.raises(InvalidInputError):
            car_semigroup(t, -0.1)

    def test_derivation_of_identity_vanishes(self):
        assert car_derivation(car_identity(2)).num_terms == 0

    @pytest.mark.parametrize("subset", [[1], [2, 3], [1, 2, 3]])
    def test_symmetrized_gradient_of_basis(self, subset):
        grad = symmetrized_gradient(CarElement.basis(3, subset))
        assert np.allclose(grad, math.sqrt(2 * len(subset)) * np.eye(8), atol=1e-10)


class TestProjections:
    def test_conditional_expectation(self, rng):
        t = _random_car(rng, 2)
        outside = PauliElement.from_labels({"IQ": 1.0, "UP": 2.0})
        assert conditional_expectation_mn_prime(t.to_pauli() + outside).allclose(t)

    def test_components_recover_the_coefficient(self, rng):
        t = _random_car(rng, 3)
        for j in (1, 3):
            s = pauli_mul(car_generator("P", j, 3), t.to_pauli())
            assert car_projection_pi_prime(s, j).allclose(s)
            assert car_components(s, j).allclose(t, atol=1e-12)

    def test_projection_drops_other_sites(self, rng):
        t = _random_car(rng, 2)
        s = pauli_mul(car_generator("P", 2, 2), t.to_pauli())
        assert car_projection_pi_prime(s, 1).num_terms == 0

    def test_sign_flip(self):
        n, j = 3, 2
        assert car_sign_flip(car_generator("P", j, n), j).allclose(-car_generator("P", j, n))
        for k in (1, 2, 3):
            q = car_generator("Q", k, n)
            assert car_sign_flip(q, j).allclose(q)
            if k != j:
                p = car_generator("P", k, n)
                assert car_sign_flip(p, j).allclose(p)


class TestAngularRepresentation:
    @pytest.mark.parametrize("beta", [0.75, 1.0, 1.6])
    def test_integral_matches_coefficient_rule(self, rng, beta):
        t = _random_car(rng, 3)
        for j in (1, 3):
            via_integral = car_d_integral(t, beta, j, tol=1e-11)
            assert via_integral.allclose(car_d_spectral(t, beta, j), atol=1e-7)

    def test_spectral_side(self):
        t = CarElement.basis(2, [1, 2])
        expected = car_annihilation(t, 2) * special.gamma(0.8)
        assert car_d_spectral(t, 0.8, 2).allclose(expected)

    def test_beta_domain(self):
        with pytest.raises(InvalidInputError):
            car_d_integral(car_identity(2), 0.5, 1)
