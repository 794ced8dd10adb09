import math

import numpy as np
import pytest

from poincare_cube.errors import InvalidInputError
from poincare_cube.quadrature import integrate_singular


class TestIntegrateSingular:
    def test_smooth_integrand(self):
        result = integrate_singular(np.sin, 0.0, 0.5 * math.pi, 1e-12)
        assert result.value == pytest.approx(1.0, abs=1e-11)
        assert result.method == "tanh-sinh"
        assert result.error_estimate <= 1e-12

    def test_inverse_square_root_singularity(self):
        result = integrate_singular(lambda x: x**-0.5, 0.0, 1.0, 1e-10, left_order=0.5)
        assert result.value == pytest.approx(2.0, abs=1e-9)

    def test_log_singularity_without_substitution(self):
        # ∫₀¹ log x dx = −1
        result = integrate_singular(np.log, 0.0, 1.0, 1e-10)
        assert result.value == pytest.approx(-1.0, abs=1e-9)

    def test_vector_valued_integrand(self):
        ks = np.arange(1, 4, dtype=np.float64)

        def g(x):
            return x[:, None] ** (ks[None, :] - 1.0)

        result = integrate_singular(g, 0.0, 1.0, 1e-11)
        assert np.allclose(result.value, 1.0 / ks, atol=1e-10)

    def test_complex_integrand(self):
        result = integrate_singular(lambda x: np.exp(1j * x), 0.0, math.pi, 1e-11)
        assert result.value == pytest.approx(2j, abs=1e-10)

    @pytest.mark.parametrize(
        ("a", "b", "kwargs"),
        [
            (1.0, 0.0, {}),
            (0.0, 1.0, {"left_order": 1.0}),
            (0.0, 1.0, {"tol": 0.0}),
        ],
    )
    def test_invalid_arguments(self, a, b, kwargs):
        with pytest.raises(InvalidInputError):
            integrate_singular(np.sin, a, b, **kwargs)

    def test_wrong_integrand_shape(self):
        with pytest.raises(InvalidInputError):
            integrate_singular(lambda x: np.ones(3), 0.0, 1.0)
