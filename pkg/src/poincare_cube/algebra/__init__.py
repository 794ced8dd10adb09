"""Operator algebras: M_{2^n} in Pauli and dense form, and the CAR algebra M′_n."""

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .car import CarElement, car_generator
    from .dense import from_dense, to_dense
    from .pauli import PauliElement, embed_function, pauli_generator, pauli_mul, rotate

__all__ = [
    "CarElement",
    "PauliElement",
    "car_generator",
    "embed_function",
    "from_dense",
    "pauli_generator",
    "pauli_mul",
    "rotate",
    "to_dense",
]

_MODULE_OF = {
    "CarElement": "car",
    "car_generator": "car",
    "from_dense": "dense",
    "to_dense": "dense",
    "PauliElement": "pauli",
    "embed_function": "pauli",
    "pauli_generator": "pauli",
    "pauli_mul": "pauli",
    "rotate": "pauli",
}


def __getattr__(name: str):
    module_name = _MODULE_OF.get(name)
    if module_name is None:
        raise AttributeError(name)
    from importlib import import_module

    return getattr(import_module(f".{module_name}", __name__), name)
