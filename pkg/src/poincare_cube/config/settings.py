import os

from dotenv import load_dotenv

load_dotenv()

TRUE_ENV_VALUES = frozenset({"true", "1", "yes"})
LOG_LEVELS = frozenset({"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"})


def _get_env_or_none(name: str) -> str | None:
    value = os.getenv(name)
    if value is None:
        return None
    stripped_value = value.strip()
    return stripped_value or None


def _parse_positive_int_env(name: str, default: int) -> int:
    raw_value = _get_env_or_none(name)
    if raw_value is None:
        return default
    try:
        parsed = int(raw_value)
    except ValueError as exc:
        raise RuntimeError(
            f"Invalid {name} value. Expected a positive integer, but received {raw_value!r}."
        ) from exc
    if parsed < 1:
        raise RuntimeError(
            f"Invalid {name} value. Expected a positive integer, but received {raw_value!r}."
        )
    return parsed


def _parse_log_level_env(name: str, default: str = "INFO") -> str:
    level = (_get_env_or_none(name) or default).upper()
    if level not in LOG_LEVELS:
        allowed = ", ".join(sorted(LOG_LEVELS))
        raise RuntimeError(f"Invalid {name} value {level!r}. Expected one of: {allowed}.")
    return level


def _parse_bool_env(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).strip().lower() in TRUE_ENV_VALUES


# Thread pool size for independent random trials; 1 runs them inline.
WORKERS = _parse_positive_int_env("POINCARE_WORKERS", 1)
LOG_LEVEL = _parse_log_level_env("POINCARE_LOG_LEVEL")
# Attach the serialized worst-case input to passing reports as well as failing ones.
ALWAYS_EMIT_WITNESS = _parse_bool_env("POINCARE_ALWAYS_EMIT_WITNESS", "true")
