"""Theorem checkers, the registry that names them and the reports they return."""

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .registry import THEOREM_REGISTRY, run_theorem
    from .report import Report
    from .search import extremal_search

__all__ = ["THEOREM_REGISTRY", "Report", "extremal_search", "run_theorem"]

_MODULE_OF = {
    "THEOREM_REGISTRY": "registry",
    "run_theorem": "registry",
    "Report": "report",
    "extremal_search": "search",
}


def __getattr__(name: str):
    module_name = _MODULE_OF.get(name)
    if module_name is None:
        raise AttributeError(name)
    from importlib import import_module

    return getattr(import_module(f".{module_name}", __name__), name)
