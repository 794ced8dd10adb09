"""Evaluate check instances, concurrently when configured, and fold them in trial order."""

from __future__ import annotations

import contextvars
import logging
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Generic, TypeVar

from ..config import settings
from .report import MAIN_COMPONENT, RatioTotals

logger = logging.getLogger(__name__)

X = TypeVar("X")
R = TypeVar("R")


@dataclass(frozen=True)
class Observation:
    """One LHS / RHS pair produced by evaluating an instance.

    ``skip`` carries a reason when the instance could not be evaluated (overflow,
    zero gradient) and is dropped instead of observed; ``note`` is copied into the
    report notes.
    """

    lhs: float
    rhs: float
    label: str
    witness: Callable[[], dict[str, Any]] | None = None
    component: str = MAIN_COMPONENT
    bound: float | None = None
    skip: str | None = None
    note: str | None = None


@dataclass(frozen=True)
class TrialPlan(Generic[X]):
    corpus: Sequence[tuple[str, X]]
    trials: int
    make_trial: Callable[[int], tuple[str, X]]


def resolve_workers(workers: int | None) -> int:
    return settings.WORKERS if workers is None else max(1, int(workers))


def ordered_map(fn: Callable[[X], R], items: Iterable[X], workers: int) -> list[R]:
    """``map`` that keeps input order; runs on a thread pool when ``workers`` > 1."""
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="poincare-trial") as pool:
        # each task runs in a copy of the caller context so log records keep the run id
        futures = [pool.submit(contextvars.copy_context().run, fn, item) for item in items]
        return [future.result() for future in futures]


def fold(totals: RatioTotals, batches: Iterable[Sequence[Observation]]) -> None:
    for batch in batches:
        for obs in batch:
            if obs.note is not None:
                totals.note(obs.note)
            if obs.skip is not None:
                totals.skip(obs.label, obs.skip)
                continue
            totals.observe(
                obs.lhs,
                obs.rhs,
                label=obs.label,
                witness=obs.witness,
                component=obs.component,
                bound=obs.bound,
            )


def run_plan(
    totals: RatioTotals,
    plan: TrialPlan[X],
    evaluate: Callable[[str, X], Sequence[Observation]],
    *,
    tol: float,
    workers: int | None = None,
    abort_on_corpus_failure: bool = True,
) -> None:
    """Run the corpus, then ``plan.trials`` random instances.

    A corpus violation stops the run before any random trial is drawn.
    """
    pool_size = resolve_workers(workers)
    fold(totals, ordered_map(lambda item: evaluate(*item), plan.corpus, pool_size))
    if abort_on_corpus_failure and totals.exceeds(tol):
        logger.warning(
            "corpus instance exceeds the bound (worst ratio %.6g); skipping random trials",
            totals.worst_ratio,
        )
        totals.note("corpus violation; random trials not run")
        return
    fold(
        totals,
        ordered_map(lambda i: evaluate(*plan.make_trial(i)), range(plan.trials), pool_size),
    )


__all__ = ["Observation", "TrialPlan", "fold", "ordered_map", "resolve_workers", "run_plan"]
