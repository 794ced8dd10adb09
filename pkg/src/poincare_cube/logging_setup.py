"""Run-scoped logging for the checks and the CLI.

Every record carries the id of the run that produced it. The id lives in a
context variable, so trial workers started with a copied context log under the
id of the check that spawned them. Output always goes to stderr; stdout belongs
to the reports. ``LOG_FORMAT=json`` switches to JSON lines.
"""

from __future__ import annotations

import json
import logging
import os
import secrets
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Literal

RUN_ID: ContextVar[str | None] = ContextVar("run_id", default=None)

LogFormat = Literal["text", "json"]

TEXT_LAYOUT = "%(asctime)s %(levelname)-8s [run=%(run_id)s] %(name)s - %(message)s"
TIME_LAYOUT = "%Y-%m-%dT%H:%M:%S%z"
_HANDLER_MARK = "_poincare_run_handler"


def current_run_id() -> str:
    return RUN_ID.get() or "-"


@contextmanager
def run_scope(run_id: str | None = None) -> Iterator[str]:
    """Bind a run id for the block and restore the previous binding afterwards.

    Without an explicit id an enclosing run's id is inherited; a fresh 8-hex id
    is drawn only when nothing is bound yet.
    """
    token = RUN_ID.set(run_id or RUN_ID.get() or secrets.token_hex(4))
    try:
        yield current_run_id()
    finally:
        RUN_ID.reset(token)


class RunFormatter(logging.Formatter):
    """Text or JSON-lines records stamped with the run id current at emit time."""

    def __init__(self, layout: LogFormat = "text") -> None:
        super().__init__(TEXT_LAYOUT, datefmt=TIME_LAYOUT)
        self.layout = layout

    def format(self, record: logging.LogRecord) -> str:
        record.run_id = current_run_id()
        if self.layout == "text":
            return super().format(record)
        payload: dict[str, Any] = {
            "timestamp": self.formatTime(record, self.datefmt),
            "level": record.levelname,
            "logger": record.name,
            "run_id": record.run_id,
            "thread": record.threadName,
            "message": record.getMessage(),
        }
        if record.exc_info:
            payload["exc_info"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False)


def log_format_from_env() -> LogFormat:
    return "json" if os.getenv("LOG_FORMAT", "text").strip().lower() == "json" else "text"


def configure_logging(
    level: int | str = logging.INFO, layout: LogFormat | None = None
) -> logging.Handler:
    """Install the stderr handler on the root logger, replacing one installed earlier.

    The level, the layout and the ``sys.stderr`` in effect at call time all apply.
    """
    root = logging.getLogger()
    for existing in list(root.handlers):
        if getattr(existing, _HANDLER_MARK, False):
            root.removeHandler(existing)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(RunFormatter(layout or log_format_from_env()))
    setattr(handler, _HANDLER_MARK, True)
    root.addHandler(handler)
    root.setLevel(level)
    return handler


__all__ = [
    "RUN_ID",
    "RunFormatter",
    "configure_logging",
    "current_run_id",
    "log_format_from_env",
    "run_scope",
]
