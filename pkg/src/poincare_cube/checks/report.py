"""Structured outcome of one theorem check.

A check feeds ratio observations LHS / RHS into :class:`RatioTotals` in trial
order and turns the totals into a frozen :class:`Report`. Reports serialize to
JSON with a stable key order and parse back to an equal object.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config.defaults import TOLERANCES
from ..errors import InvalidInputError

logger = logging.getLogger(__name__)

Status = Literal["pass", "fail", "inconclusive", "informational"]
Mode = Literal["inequality", "upper-bound", "informational"]

# merge keeps the most severe status
_SEVERITY: dict[str, int] = {"informational": 0, "pass": 1, "inconclusive": 2, "fail": 3}
MAIN_COMPONENT = "main"


def _package_version() -> str:
    from .. import __version__

    return __version__


class Component(BaseModel):
    """Worst raw ratio of one inequality inside a report."""

    model_config = ConfigDict(frozen=True, extra="forbid", ser_json_inf_nan="strings")

    worst_ratio: float
    bound_constant: float | None = None
    instances: int = 0


class Report(BaseModel):
    """Outcome of one theorem check.

    ``worst_ratio`` is the largest observed LHS / RHS-without-constant and
    ``bound_constant`` the constant the theorem allows. When a check tests several
    inequalities, each component ratio is rescaled to the main constant before it
    enters ``worst_ratio``; the raw values stay in ``components``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", ser_json_inf_nan="strings")

    theorem_id: str
    params: dict[str, Any] = Field(default_factory=dict)
    instances: int = Field(default=0, ge=0)
    skipped: int = Field(default=0, ge=0)
    worst_ratio: float = 0.0
    bound_constant: float | None = None
    status: Status = "informational"
    passed: bool | None = None
    tol: float = TOLERANCES.inequality
    witness: dict[str, Any] | None = None
    notes: list[str] = Field(default_factory=list)
    components: dict[str, Component] = Field(default_factory=dict)
    table: list[dict[str, Any]] | None = None
    seed: int | None = None
    version: str = Field(default_factory=_package_version)

    @model_validator(mode="after")
    def _check_status(self) -> Report:
        if self.status in ("pass", "fail"):
            if self.bound_constant is None:
                raise ValueError(f"status {self.status!r} needs a bound constant.")
            if self.passed != (self.status == "pass"):
                raise ValueError("`passed` must agree with `status`.")
            within = self.worst_ratio <= self.bound_constant + self.tol
            if within != self.passed:
                raise ValueError(
                    f"`passed` is {self.passed} but worst ratio {self.worst_ratio!r} vs bound "
                    f"{self.bound_constant!r} + {self.tol!r} says otherwise."
                )
        elif self.passed is not None:
            raise ValueError(f"`passed` must be null for status {self.status!r}.")
        return self

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    def merge(self, other: Report) -> Report:
        """Combine two reports of the same check; the operation is associative.

        Ties on the worst ratio keep the left witness, notes keep first-seen order
        and the status is the more severe of the two.
        """
        if other.theorem_id != self.theorem_id:
            raise InvalidInputError(
                f"cannot merge reports for {self.theorem_id!r} and {other.theorem_id!r}."
            )
        if other.bound_constant != self.bound_constant or other.tol != self.tol:
            raise InvalidInputError("cannot merge reports with different bounds or tolerances.")
        worse = other if other.worst_ratio > self.worst_ratio else self
        components = dict(self.components)
        for name, comp in other.components.items():
            mine = components.get(name)
            if mine is None:
                components[name] = comp
            else:
                components[name] = Component(
                    worst_ratio=max(mine.worst_ratio, comp.worst_ratio),
                    bound_constant=mine.bound_constant,
                    instances=mine.instances + comp.instances,
                )
        status = max(self.status, other.status, key=_SEVERITY.__getitem__)
        table = None
        if self.table is not None or other.table is not None:
            table = [*(self.table or []), *(other.table or [])]
        return self.model_copy(
            update={
                "instances": self.instances + other.instances,
                "skipped": self.skipped + other.skipped,
                "worst_ratio": worse.worst_ratio,
                "witness": worse.witness,
                "status": status,
                "passed": None if status not in ("pass", "fail") else status == "pass",
                "notes": list(dict.fromkeys([*self.notes, *other.notes])),
                "components": components,
                "table": table,
            }
        )


@dataclass
class RatioTotals:
    """Accumulates ratio observations across trials.

    Observations must arrive in trial order so the recorded witness does not
    depend on scheduling.
    """

    bound_constant: float | None
    instances: int = 0
    skipped: int = 0
    degenerate: int = 0
    worst_ratio: float = 0.0
    witness: dict[str, Any] | None = None
    notes: list[str] = field(default_factory=list)
    components: dict[str, Component] = field(default_factory=dict)
    table: list[dict[str, Any]] | None = None
    degenerate_atol: float = TOLERANCES.exact

    def observe(
        self,
        lhs: float,
        rhs: float,
        *,
        label: str,
        witness: Callable[[], dict[str, Any]] | None = None,
        component: str = MAIN_COMPONENT,
        bound: float | None = None,
    ) -> float | None:
        """Record LHS / RHS and return the ratio, or ``None`` for a skipped 0/0."""
        if rhs <= self.degenerate_atol:
            if lhs <= self.degenerate_atol:
                self.skipped += 1
                self.degenerate += 1
                logger.warning("skipped degenerate instance %s (0/0)", label)
                return None
            ratio = float("inf")
        else:
            ratio = lhs / rhs
        bound = self.bound_constant if component == MAIN_COMPONENT else bound
        previous = self.components.get(component)
        self.components[component] = Component(
            worst_ratio=ratio if previous is None else max(previous.worst_ratio, ratio),
            bound_constant=bound,
            instances=1 if previous is None else previous.instances + 1,
        )
        self.instances += 1
        scaled = ratio
        if bound is not None and self.bound_constant is not None and bound != self.bound_constant:
            scaled = ratio * self.bound_constant / bound
        elif bound is None and component != MAIN_COMPONENT:
            # informational component: tracked, never compared
            return ratio
        if scaled > self.worst_ratio or (self.witness is None and scaled == self.worst_ratio):
            self.worst_ratio = scaled
            self.witness = {"label": label, "component": component}
            if witness is not None:
                self.witness.update(witness())
        return ratio

    def skip(self, label: str, reason: str) -> None:
        self.skipped += 1
        logger.warning("skipped instance %s: %s", label, reason)
        self.note(f"skipped: {reason}")

    def note(self, text: str) -> None:
        if text not in self.notes:
            self.notes.append(text)

    def add_rows(self, rows: Iterable[dict[str, Any]]) -> None:
        if self.table is None:
            self.table = []
        self.table.extend(rows)

    def exceeds(self, tol: float) -> bool:
        return self.bound_constant is not None and self.worst_ratio > self.bound_constant + tol

    def to_report(
        self,
        theorem_id: str,
        *,
        params: dict[str, Any],
        tol: float,
        seed: int | None,
        mode: Mode = "inequality",
        emit_witness: bool = True,
    ) -> Report:
        if mode == "informational" or self.bound_constant is None:
            status: Status = "informational"
        elif not self.exceeds(tol):
            status = "pass"
        else:
            status = "fail" if mode == "inequality" else "inconclusive"
        notes = list(self.notes)
        if self.degenerate:
            notes.append(f"{self.degenerate} degenerate instance(s) skipped (0/0)")
        if status == "inconclusive":
            notes.append("infimum only upper-bounded; a larger upper bound is not a violation")
        keep_witness = emit_witness or status in ("fail", "inconclusive")
        return Report(
            theorem_id=theorem_id,
            params=params,
            instances=self.instances,
            skipped=self.skipped,
            worst_ratio=self.worst_ratio,
            bound_constant=self.bound_constant,
            status=status,
            passed=None if status not in ("pass", "fail") else status == "pass",
            tol=tol,
            witness=self.witness if keep_witness else None,
            notes=notes,
            components=dict(self.components),
            table=self.table,
            seed=seed,
        )


__all__ = [
    "MAIN_COMPONENT",
    "Component",
    "Mode",
    "RatioTotals",
    "Report",
    "Status",
]
