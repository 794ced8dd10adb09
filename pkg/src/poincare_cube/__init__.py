"""Top-level namespace for poincare-cube; heavy modules load on first attribute access."""

import warnings
from functools import cache
from importlib import metadata
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .algebra.pauli import PauliElement
    from .checks.registry import run_theorem
    from .checks.report import Report
    from .cube import CubeFunction

__all__ = ["CubeFunction", "PauliElement", "Report", "__version__", "run_theorem"]

_MODULE_OF = {
    "CubeFunction": "cube",
    "PauliElement": "algebra.pauli",
    "Report": "checks.report",
    "run_theorem": "checks.registry",
}


@cache
def _package_version() -> str:
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DeprecationWarning)
            return metadata.version("poincare-cube")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def __getattr__(name: str):
    if name == "__version__":
        return _package_version()
    module_name = _MODULE_OF.get(name)
    if module_name is None:
        raise AttributeError(name)
    from importlib import import_module

    return getattr(import_module(f".{module_name}", __name__), name)
