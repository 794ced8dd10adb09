import math

import pytest

from poincare_cube.checks.search import OBJECTIVES, ObjectiveParams, extremal_search
from poincare_cube.errors import InvalidInputError, UnsupportedSpaceError
from poincare_cube.norms import FunctionSpace

L2 = FunctionSpace.lp(2.0)


class TestExtremalSearch:
    def test_poincare_finds_the_l2_extremal(self):
        result = extremal_search(3, L2, "poincare", budget=200, seed=0)
        # level-1 functions give ½, the largest L² ratio
        assert result.best_ratio == pytest.approx(0.5, abs=1e-9)
        assert result.evaluations <= 200
        assert result.bound == pytest.approx(math.pi / 4)

    def test_report(self):
        report = extremal_search(3, L2, "poincare", budget=120).to_report()
        assert report.theorem_id == "search:poincare"
        assert report.status == "pass"
        assert report.instances <= 120
        assert report.params["objective"] == "poincare"
        assert report.witness is not None
        assert report.witness["kind"] == "cube_function"

    def test_deterministic(self):
        a = extremal_search(3, FunctionSpace.lp(3.0), "fractional", budget=150, seed=4)
        b = extremal_search(3, FunctionSpace.lp(3.0), "fractional", budget=150, seed=4)
        assert a.best_ratio == b.best_ratio
        assert a.witness == b.witness

    def test_budget_is_shared_across_starts(self):
        result = extremal_search(2, L2, "moment", budget=5, starts=3)
        assert result.evaluations <= 5
        assert result.starts == 3

    def test_log_sobolev_is_informational(self):
        report = extremal_search(2, L2, "log-sobolev", budget=40).to_report()
        assert report.status == "informational"
        assert report.passed is None

    def test_semigroup_uses_theta(self):
        result = extremal_search(
            2, L2, "semigroup", budget=40, params=ObjectiveParams(theta0=0.5)
        )
        assert result.bound == pytest.approx(0.25)

    def test_objectives(self):
        assert set(OBJECTIVES) == {
            "poincare",
            "semigroup",
            "fractional",
            "reverse-convex",
            "moment",
            "log-sobolev",
        }

    def test_unknown_objective(self):
        with pytest.raises(InvalidInputError, match="unknown objective"):
            extremal_search(3, L2, "nope")

    @pytest.mark.parametrize("budget", [0, -3])
    def test_bad_budget(self, budget):
        with pytest.raises(InvalidInputError):
            extremal_search(3, L2, "poincare", budget=budget)

    def test_reverse_needs_two_convex(self):
        with pytest.raises(UnsupportedSpaceError):
            extremal_search(3, FunctionSpace.lp(1.5), "reverse-convex", budget=10)
