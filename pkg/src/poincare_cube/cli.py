"""Command-line driver: ``poincare-verify <command> [flags]``.

Reports go to stdout (or ``--out``) in one write at the end of the run; logs go
to stderr. Exit codes: 0 when no report failed, 1 when any did, 2 for usage, invalid
input or a run aborted by a budget or numeric error, 3 when the output could not
be written.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .config import settings
from .config.run import OutputFormat, RunConfig, merge_sources
from .errors import InvalidInputError, PoincareError, UnsupportedSpaceError
from .logging_setup import configure_logging, run_scope

if TYPE_CHECKING:
    from .checks.report import Report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

CSV_HEADER = ("theorem_id", "n", "space", "instances", "worst_ratio", "bound_constant", "passed")

# flags that only steer the CLI itself and are not RunConfig fields
_CLI_ONLY = frozenset({"command", "config", "theorem_ids"})


def _common_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("run settings")
    group.add_argument("--n", type=int, help="dimension / number of sites")
    group.add_argument("--space", help="function space: lp:<p>, linf or orlicz (default lp:2)")
    group.add_argument("--trials", type=int, help="random trials after the corpus")
    group.add_argument("--seed", type=int, help="base seed (default 0)")
    group.add_argument("--alpha", type=float, help="fractional exponent α")
    group.add_argument("--beta", type=float, help="reverse-inequality exponent β")
    group.add_argument("--theta0", type=float, help="semigroup angle θ₀ in [0, π/2]")
    group.add_argument("--C", dest="c", type=float, help="universal constant C (default 1.0)")
    group.add_argument("--tol", type=float, help="additive slack on every inequality")
    group.add_argument("--format", choices=("json", "csv", "text"), help="output format")
    group.add_argument("--out", type=Path, help="write reports to this file instead of stdout")
    group.add_argument("--config", type=Path, help="key = value file with run settings")
    group.add_argument("--workers", type=int, help="trial thread pool size")
    group.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ...")
    group.add_argument("--n-max", dest="n_max", type=int, help="largest n for riesz")
    group.add_argument("--p", type=float, help="L^p exponent for riesz")
    group.add_argument("--j-samples", dest="j_samples", type=int, help="subsets for appendix")
    group.add_argument("--t-grid", dest="t_grid", help="comma-separated tail thresholds")
    group.add_argument("--budget", type=int, help="evaluation budget for search")
    return parent


def build_parser() -> argparse.ArgumentParser:
    from . import __version__
    from .checks.registry import theorem_help
    from .checks.search import OBJECTIVES

    ids = theorem_help()
    parser = argparse.ArgumentParser(
        prog="poincare-verify",
        description="Check Poincaré-type inequalities on the discrete cube and the CAR algebra.",
        epilog=f"theorem ids:\n{ids}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")
    common = [_common_flags()]

    verify = commands.add_parser(
        "verify",
        parents=common,
        help="run one or more theorem checks",
        epilog=f"theorem ids (or 'all'):\n{ids}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    verify.add_argument("theorem_ids", nargs="*", metavar="theorem-id")
    commands.add_parser(
        "constants", parents=common, help="tabulate K_α, k_β and K_E for the given exponents"
    )
    commands.add_parser(
        "sweep", parents=common, help="run every registered check that supports the space"
    )
    commands.add_parser("riesz", parents=common, help="Riesz-product growth table")
    search = commands.add_parser(
        "search", parents=common, help="local search for large ratio values"
    )
    search.add_argument("objective", choices=sorted(OBJECTIVES))
    return parser


def _flags(ns: argparse.Namespace) -> dict[str, Any]:
    return {key: value for key, value in vars(ns).items() if key not in _CLI_ONLY}


def _run_config(ns: argparse.Namespace) -> RunConfig:
    flags = _flags(ns)
    if ns.command == "verify" and ns.theorem_ids:
        from .checks.registry import THEOREM_REGISTRY

        ids = list(THEOREM_REGISTRY) if ns.theorem_ids == ["all"] else ns.theorem_ids
        flags["theorems"] = ids
    return merge_sources(flags, ns.config)


def constants_report(cfg: RunConfig) -> Report:
    """K_α, k_β and K_E as an informational report with one table row per constant."""
    from .checks.report import Report
    from .norms import khintchine_constant, space_caveats
    from .spectral import constant_K_alpha, constant_k_beta

    alpha = 0.25 if cfg.alpha is None else cfg.alpha
    beta = 0.75 if cfg.beta is None else cfg.beta
    sp = cfg.function_space
    rows: list[dict[str, Any]] = []
    notes: list[str] = []
    if 0.0 < alpha < 0.5:
        rows.append({"constant": "K_alpha", "exponent": alpha, "value": constant_K_alpha(alpha)})
    else:
        notes.append(f"K_alpha needs alpha in (0, ½); got {alpha:g}")
    if beta > 0.5:
        rows.append({"constant": "k_beta", "exponent": beta, "value": constant_k_beta(beta)})
    else:
        notes.append(f"k_beta needs beta > ½; got {beta:g}")
    try:
        k_e = khintchine_constant(sp, cfg.c)
    except UnsupportedSpaceError as exc:
        notes.append(str(exc))
    else:
        rows.append({"constant": "K_E", "space": sp.descriptor, "value": k_e})
        notes.extend(space_caveats(sp, cfg.c))
    return Report(
        theorem_id="constants",
        params={"alpha": alpha, "beta": beta, "space": sp.descriptor},
        notes=notes,
        table=rows,
    )


def _sweep(cfg: RunConfig) -> list[Report]:
    from .checks.registry import THEOREM_REGISTRY, run_theorem

    reports: list[Report] = []
    for theorem_id, entry in THEOREM_REGISTRY.items():
        n = None if cfg.n is None else min(cfg.n, entry.max_n)
        try:
            reports.append(run_theorem(theorem_id, cfg.model_copy(update={"n": n})))
        except UnsupportedSpaceError as exc:
            logger.warning("sweep: skipping %s: %s", theorem_id, exc)
    return reports


def _search(cfg: RunConfig) -> Report:
    from .checks.search import ObjectiveParams, extremal_search

    params = ObjectiveParams(
        alpha=0.25 if cfg.alpha is None else cfg.alpha,
        beta=0.75 if cfg.beta is None else cfg.beta,
        theta0=cfg.theta0,
        c=cfg.c,
    )
    with run_scope():
        result = extremal_search(
            6 if cfg.n is None else cfg.n,
            cfg.function_space,
            cfg.objective,
            cfg.budget,
            cfg.seed,
            params=params,
        )
    return result.to_report(cfg.tol)


def collect_reports(command: str, cfg: RunConfig) -> list[Report]:
    from .checks.registry import run_theorem

    if command == "verify":
        if not cfg.theorems:
            raise InvalidInputError("`verify` needs at least one theorem id (or 'all').")
        return [run_theorem(theorem_id, cfg) for theorem_id in cfg.theorems]
    if command == "constants":
        return [constants_report(cfg)]
    if command == "sweep":
        return _sweep(cfg)
    if command == "riesz":
        return [run_theorem("riesz", cfg)]
    if command == "search":
        return [_search(cfg)]
    raise InvalidInputError(f"unknown command `{command}`.")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_reports(reports: Sequence[Report], fmt: OutputFormat) -> str:
    """Serialize reports: JSON lines, CSV with a fixed header, or a text table."""
    if fmt == "json":
        return "".join(report.model_dump_json() + "\n" for report in reports)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for report in reports:
            params = report.params
            writer.writerow(
                [
                    report.theorem_id,
                    _cell(params.get("n", params.get("n_max"))),
                    _cell(params.get("space")),
                    report.instances,
                    _cell(report.worst_ratio),
                    _cell(report.bound_constant),
                    _cell(report.passed),
                ]
            )
        return buffer.getvalue()
    lines = [
        f"{'theorem':<24} {'status':<13} {'instances':>9} {'worst ratio':>14} {'bound':>14}"
    ]
    for report in reports:
        bound = "-" if report.bound_constant is None else f"{report.bound_constant:.10g}"
        lines.append(
            f"{report.theorem_id:<24} {report.status:<13} {report.instances:>9} "
            f"{report.worst_ratio:>14.10g} {bound:>14}"
        )
        lines.extend(f"    note: {note}" for note in report.notes)
        for row in report.table or []:
            lines.append("    " + ", ".join(f"{key}={_cell(value)}" for key, value in row.items()))
    return "\n".join(lines) + "\n"


def emit_report(reports: Sequence[Report], fmt: OutputFormat, sink: Path | None = None) -> None:
    """Write the rendered reports once, to ``sink`` or stdout; raises OSError on failure."""
    text = render_reports(reports, fmt)
    if sink is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        sink.write_text(text, encoding="utf-8")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _run_config(ns)
    except InvalidInputError as exc:
        parser.error(str(exc))
    configure_logging(cfg.log_level or settings.LOG_LEVEL)
    with run_scope() as run_id:
        logger.info("poincare-verify %s (run %s)", ns.command, run_id)
        return _execute(ns.command, cfg)


def _execute(command: str, cfg: RunConfig) -> int:
    try:
        reports = collect_reports(command, cfg)
    except InvalidInputError as exc:
        print(f"poincare-verify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PoincareError as exc:
        # budget and numeric failures: the run produced no reports
        logger.error("%s aborted: %s", command, exc)
        print(f"poincare-verify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        emit_report(reports, cfg.format, cfg.out)
    except OSError as exc:
        logger.error("could not write reports: %s", exc)
        print(f"poincare-verify: error: could not write reports: {exc}", file=sys.stderr)
        return EXIT_IO
    failed = [report.theorem_id for report in reports if report.failed]
    if failed:
        logger.warning("failing reports: %s", ", ".join(failed))
        return EXIT_FAILED
    return EXIT_OK


__all__ = [
    "CSV_HEADER",
    "build_parser",
    "collect_reports",
    "constants_report",
    "emit_report",
    "main",
    "render_reports",
]
