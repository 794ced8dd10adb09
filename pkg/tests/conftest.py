import os

import numpy as np
import pytest

from poincare_cube.cube import CubeFunction
from poincare_cube.logging_setup import RUN_ID


@pytest.fixture(autouse=True)
def _clear_poincare_env(monkeypatch):
    """Keep a developer's POINCARE_* / LOG_FORMAT settings out of the tests."""
    for name in list(os.environ):
        if name.startswith("POINCARE_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.delenv("LOG_FORMAT", raising=False)


@pytest.fixture(autouse=True)
def _reset_run_id():
    token = RUN_ID.set(None)
    yield
    RUN_ID.reset(token)


@pytest.fixture
def rng():
    """A fixed generator so random inputs are identical from run to run."""
    return np.random.default_rng(20240611)


def make_function(rng: np.random.Generator, n: int, *, real: bool = False) -> CubeFunction:
    """Gaussian Walsh coefficients on Ω_n."""
    coeffs = rng.standard_normal(1 << n)
    if not real:
        coeffs = coeffs + 1j * rng.standard_normal(1 << n)
    return CubeFunction(n, coeffs=coeffs)


@pytest.fixture
def random_function(rng):
    def factory(n: int, *, real: bool = False) -> CubeFunction:
        return make_function(rng, n, real=real)

    return factory
