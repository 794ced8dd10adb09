import pytest

from poincare_cube.algebra.integrals import (
    d_inverse_power_integral,
    d_inverse_power_spectral,
    fractional_number_via_rotation,
)
from poincare_cube.algebra.pauli import embed_function, identity_element, pauli_generator
from poincare_cube.cube import CubeFunction
from poincare_cube.errors import InvalidDomainError, InvalidInputError
from poincare_cube.spectral import number_operator


class TestFractionalNumber:
    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_matches_coefficient_rule(self, random_function, alpha):
        f = random_function(3)
        via_rotation = fractional_number_via_rotation(embed_function(f), alpha, tol=1e-11)
        expected = embed_function(number_operator(f, alpha))
        assert via_rotation.allclose(expected, atol=1e-7)

    def test_identity_is_annihilated(self):
        assert fractional_number_via_rotation(identity_element(2), 0.4).num_terms == 0

    @pytest.mark.parametrize("alpha", [0.0, 1.0])
    def test_alpha_domain(self, alpha):
        with pytest.raises(InvalidInputError):
            fractional_number_via_rotation(identity_element(1), alpha)


class TestInversePowerDerivative:
    @pytest.mark.parametrize("beta", [0.6, 1.0, 2.5])
    def test_integral_matches_coefficient_rule(self, random_function, beta):
        t = embed_function(random_function(3))
        for j in (1, 2, 3):
            via_integral = d_inverse_power_integral(t, beta, j, tol=1e-11)
            assert via_integral.allclose(d_inverse_power_spectral(t, beta, j), atol=1e-7)

    def test_walsh_function(self):
        t = embed_function(CubeFunction.walsh(2, [1, 2]))
        # D_1 N^{-1} Q_1Q_2 = ½ Q_2, times Γ(1) = 1
        assert d_inverse_power_integral(t, 1.0, 1).allclose(
            embed_function(CubeFunction.walsh(2, [2])) * 0.5, atol=1e-8
        )

    def test_requires_mn(self):
        with pytest.raises(InvalidDomainError):
            d_inverse_power_integral(pauli_generator("P", 1, 2), 1.0, 1)

    def test_beta_domain(self):
        with pytest.raises(InvalidInputError):
            d_inverse_power_integral(identity_element(2), 0.4, 1)
