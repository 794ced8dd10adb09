import pytest

from poincare_cube.checks.registry import THEOREM_REGISTRY, get_entry, run_theorem, theorem_help
from poincare_cube.config.run import RunConfig
from poincare_cube.errors import InvalidInputError, UnsupportedSpaceError
from poincare_cube.logging_setup import RUN_ID

EXPECTED_IDS = {
    "poincare",
    "semigroup",
    "fractional",
    "exponential",
    "concentration",
    "reverse-convex",
    "reverse-concave",
    "riesz",
    "moment",
    "appendix",
    "log-sobolev",
    "convolution",
    "lemma53",
    "car-lemma",
    "derivation-khintchine",
    "projection-norm",
    "car-main",
    "car-concentration",
    "car-reverse",
}


class TestRegistry:
    def test_ids_are_stable(self):
        assert set(THEOREM_REGISTRY) == EXPECTED_IDS

    def test_entries_are_consistent(self):
        for theorem_id, entry in THEOREM_REGISTRY.items():
            assert entry.id == theorem_id
            assert 1 <= entry.default_n <= entry.max_n
            assert entry.family in ("cube", "operator")

    def test_help_has_one_line_per_id(self):
        lines = theorem_help().splitlines()
        assert len(lines) == len(THEOREM_REGISTRY)
        assert lines[0].split()[0] == "poincare"

    def test_unknown_id(self):
        with pytest.raises(InvalidInputError, match="unknown theorem id"):
            get_entry("fermat")


class TestRunTheorem:
    def test_runs_with_config_settings(self):
        report = run_theorem("poincare", RunConfig(n=3, trials=2, seed=9))
        assert report.theorem_id == "poincare"
        assert report.params["n"] == 3
        assert report.params["trials"] == 2
        assert report.seed == 9
        assert report.status == "pass"

    def test_run_scope_is_restored(self):
        run_theorem("moment", RunConfig(n=2, trials=1))
        assert RUN_ID.get() is None

    def test_n_above_cap(self):
        with pytest.raises(InvalidInputError, match="exceeds the cap"):
            run_theorem("lemma53", RunConfig(n=9, trials=0))

    def test_riesz_uses_n_max_and_p(self):
        report = run_theorem("riesz", RunConfig(n_max=4, p=1.5))
        assert report.params["n_max"] == 4
        assert report.params["p"] == 1.5
        assert report.table is not None
        assert len(report.table) == 4

    def test_space_is_forwarded(self):
        with pytest.raises(UnsupportedSpaceError):
            run_theorem("reverse-convex", RunConfig(n=2, trials=0, space="lp:1.5"))

    def test_operator_check(self):
        report = run_theorem("car-main", RunConfig(n=2, trials=1))
        assert report.theorem_id == "car-main"
        assert report.status == "pass"
