import pytest

import poincare_cube
from poincare_cube.checks import THEOREM_REGISTRY, Report, run_theorem


def test_package_exports_resolve():
    assert poincare_cube.CubeFunction.__name__ == "CubeFunction"
    assert poincare_cube.PauliElement.__name__ == "PauliElement"
    assert poincare_cube.Report is Report
    assert poincare_cube.run_theorem is run_theorem


def test_version_is_a_string():
    assert isinstance(poincare_cube.__version__, str)
    assert poincare_cube.__version__


def test_unknown_attribute_raises():
    with pytest.raises(AttributeError):
        poincare_cube.not_a_thing  # noqa: B018


def test_registry_is_populated():
    assert "poincare" in THEOREM_REGISTRY
    assert "car-main" in THEOREM_REGISTRY
