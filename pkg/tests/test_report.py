import math

import pytest
from pydantic import ValidationError

from poincare_cube.checks.report import Component, RatioTotals, Report
from poincare_cube.errors import InvalidInputError


def _report(worst: float, status: str = "pass", **kwargs) -> Report:
    passed = None if status not in ("pass", "fail") else status == "pass"
    return Report(
        theorem_id="poincare",
        worst_ratio=worst,
        bound_constant=kwargs.pop("bound_constant", 1.0),
        status=status,
        passed=passed,
        **kwargs,
    )


class TestRatioTotals:
    def test_observe_tracks_the_worst_ratio(self):
        totals = RatioTotals(bound_constant=1.0)
        assert totals.observe(1.0, 4.0, label="a") == 0.25
        assert totals.observe(3.0, 4.0, label="b", witness=lambda: {"x": 1}) == 0.75
        totals.observe(1.0, 2.0, label="c")
        assert totals.instances == 3
        assert totals.worst_ratio == 0.75
        assert totals.witness == {"label": "b", "component": "main", "x": 1}

    def test_ties_keep_the_earlier_witness(self):
        totals = RatioTotals(bound_constant=1.0)
        totals.observe(1.0, 2.0, label="first")
        totals.observe(2.0, 4.0, label="second")
        assert totals.witness is not None
        assert totals.witness["label"] == "first"

    def test_zero_over_zero_is_skipped(self):
        totals = RatioTotals(bound_constant=1.0)
        assert totals.observe(0.0, 0.0, label="constant") is None
        assert totals.instances == 0
        assert totals.skipped == 1
        report = totals.to_report("poincare", params={}, tol=1e-9, seed=0)
        assert "1 degenerate instance(s) skipped (0/0)" in report.notes

    def test_positive_over_zero_is_infinite(self):
        totals = RatioTotals(bound_constant=1.0)
        assert totals.observe(1.0, 0.0, label="blowup") == math.inf
        report = totals.to_report("poincare", params={}, tol=1e-9, seed=0)
        assert report.status == "fail"
        assert report.passed is False

    def test_components_are_rescaled_to_the_main_constant(self):
        totals = RatioTotals(bound_constant=2.0)
        totals.observe(1.0, 1.0, label="main")
        raw = totals.observe(0.9, 1.0, label="side", component="side", bound=0.5)
        assert raw == pytest.approx(0.9)
        assert totals.worst_ratio == pytest.approx(3.6)
        assert totals.components["side"].worst_ratio == pytest.approx(0.9)
        assert totals.components["side"].bound_constant == 0.5
        assert totals.witness is not None
        assert totals.witness["component"] == "side"

    def test_informational_component_is_never_compared(self):
        totals = RatioTotals(bound_constant=1.0)
        totals.observe(1.0, 2.0, label="main")
        totals.observe(50.0, 1.0, label="info", component="info")
        assert totals.worst_ratio == 0.5
        assert totals.components["info"].worst_ratio == 50.0
        assert totals.components["info"].bound_constant is None

    def test_skip_records_a_note(self):
        totals = RatioTotals(bound_constant=1.0)
        totals.skip("random[3]", "overflow")
        totals.skip("random[4]", "overflow")
        assert totals.skipped == 2
        assert totals.notes == ["skipped: overflow"]


class TestToReport:
    def test_pass_and_fail(self):
        totals = RatioTotals(bound_constant=1.0)
        totals.observe(1.0 + 1e-12, 1.0, label="edge")
        assert totals.to_report("x", params={}, tol=1e-9, seed=0).status == "pass"
        totals.observe(1.1, 1.0, label="over")
        report = totals.to_report("x", params={}, tol=1e-9, seed=0)
        assert report.status == "fail"
        assert report.witness is not None

    def test_upper_bound_mode_is_inconclusive(self):
        totals = RatioTotals(bound_constant=1.0)
        totals.observe(2.0, 1.0, label="over")
        report = totals.to_report("x", params={}, tol=1e-9, seed=0, mode="upper-bound")
        assert report.status == "inconclusive"
        assert report.passed is None
        assert not report.failed

    def test_informational_without_bound(self):
        totals = RatioTotals(bound_constant=None)
        totals.observe(5.0, 1.0, label="any")
        report = totals.to_report("x", params={}, tol=1e-9, seed=None)
        assert report.status == "informational"
        assert report.passed is None
        assert report.worst_ratio == 5.0

    def test_witness_dropped_on_pass_unless_requested(self):
        totals = RatioTotals(bound_constant=1.0)
        totals.observe(0.5, 1.0, label="ok")
        assert totals.to_report("x", params={}, tol=0.0, seed=0, emit_witness=False).witness is None
        assert totals.to_report("x", params={}, tol=0.0, seed=0).witness == {
            "label": "ok",
            "component": "main",
        }


class TestReportValidation:
    def test_passed_must_agree_with_ratio(self):
        with pytest.raises(ValidationError):
            Report(theorem_id="x", worst_ratio=2.0, bound_constant=1.0, status="pass", passed=True)

    def test_pass_needs_a_bound(self):
        with pytest.raises(ValidationError):
            Report(theorem_id="x", worst_ratio=0.5, status="pass", passed=True)

    def test_informational_has_no_verdict(self):
        with pytest.raises(ValidationError):
            Report(theorem_id="x", status="informational", passed=False)

    def test_reports_are_frozen(self):
        report = _report(0.5)
        with pytest.raises(ValidationError):
            report.worst_ratio = 2.0  # type: ignore[misc]

    def test_unknown_fields_are_rejected(self):
        with pytest.raises(ValidationError):
            Report(theorem_id="x", colour="red")  # type: ignore[call-arg]

    def test_json_round_trip(self):
        report = _report(
            0.5,
            params={"n": 3, "space": "lp:2"},
            instances=7,
            skipped=1,
            witness={"label": "walsh{1..1}", "component": "main"},
            notes=["a note"],
            components={"main": Component(worst_ratio=0.5, bound_constant=1.0, instances=7)},
            table=[{"n": 1, "ratio": 0.25}],
            seed=4,
        )
        assert Report.model_validate_json(report.model_dump_json()) == report

    def test_version_is_filled_in(self):
        assert _report(0.5).version


class TestMerge:
    def test_keeps_the_worse_witness_and_sums_counts(self):
        left = _report(0.4, instances=2, witness={"label": "a"}, notes=["n1"])
        right = _report(0.6, instances=3, skipped=1, witness={"label": "b"}, notes=["n1", "n2"])
        merged = left.merge(right)
        assert merged.worst_ratio == 0.6
        assert merged.witness == {"label": "b"}
        assert merged.instances == 5
        assert merged.skipped == 1
        assert merged.notes == ["n1", "n2"]

    def test_tie_keeps_the_left_witness(self):
        merged = _report(0.5, witness={"label": "a"}).merge(_report(0.5, witness={"label": "b"}))
        assert merged.witness == {"label": "a"}

    def test_most_severe_status_wins(self):
        merged = _report(0.5).merge(_report(2.0, status="fail"))
        assert merged.status == "fail"
        assert merged.passed is False
        inconclusive = _report(0.5).merge(_report(0.2, status="inconclusive"))
        assert inconclusive.status == "inconclusive"
        assert inconclusive.passed is None

    def test_associative(self):
        a = _report(0.3, instances=1, notes=["x"], table=[{"row": 1}])
        b = _report(0.7, instances=2, notes=["y"], table=[{"row": 2}])
        c = _report(0.5, instances=4, notes=["x", "z"], table=[{"row": 3}])
        assert a.merge(b).merge(c) == a.merge(b.merge(c))

    def test_components_combine(self):
        left = _report(0.5, components={"main": Component(worst_ratio=0.5, instances=2)})
        right = _report(0.2, components={"main": Component(worst_ratio=0.2, instances=3)})
        comp = left.merge(right).components["main"]
        assert comp.worst_ratio == 0.5
        assert comp.instances == 5

    def test_rejects_different_checks(self):
        other = Report(theorem_id="semigroup", worst_ratio=0.1, bound_constant=1.0, status="pass", passed=True)
        with pytest.raises(InvalidInputError):
            _report(0.5).merge(other)

    def test_rejects_different_bounds(self):
        with pytest.raises(InvalidInputError):
            _report(0.5).merge(_report(0.5, bound_constant=2.0))
