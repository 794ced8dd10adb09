from .defaults import DEFAULTS, LIMITS, TOLERANCES, UNIVERSAL_CONSTANT_C
from .settings import ALWAYS_EMIT_WITNESS, LOG_LEVEL, WORKERS

__all__ = [
    "ALWAYS_EMIT_WITNESS",
    "DEFAULTS",
    "LIMITS",
    "LOG_LEVEL",
    "TOLERANCES",
    "UNIVERSAL_CONSTANT_C",
    "WORKERS",
]
