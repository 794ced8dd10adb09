import threading

import numpy as np
import pytest

from poincare_cube.checks.corpus import (
    car_corpus,
    cube_corpus,
    describe_function,
    random_pauli_element,
    trial_function,
    trial_rng,
)
from poincare_cube.checks.report import RatioTotals
from poincare_cube.checks.runner import Observation, TrialPlan, fold, ordered_map, run_plan
from poincare_cube.cube import CubeFunction
from poincare_cube.logging_setup import RUN_ID, run_scope


class TestOrderedMap:
    @pytest.mark.parametrize("workers", [1, 4])
    def test_keeps_input_order(self, workers):
        assert ordered_map(lambda x: x * x, range(20), workers) == [x * x for x in range(20)]

    def test_workers_see_the_run_id(self):
        seen: list[str | None] = []
        lock = threading.Lock()

        def record(_: int) -> None:
            with lock:
                seen.append(RUN_ID.get())

        with run_scope("abc123"):
            ordered_map(record, range(6), 3)
        assert seen == ["abc123"] * 6


class TestRunPlan:
    def _plan(self, corpus_ratio: float, trials: int = 5) -> TrialPlan[float]:
        return TrialPlan(
            corpus=[("fixed", corpus_ratio)],
            trials=trials,
            make_trial=lambda i: (f"random[{i}]", 0.1 * i),
        )

    @staticmethod
    def _evaluate(label: str, ratio: float) -> list[Observation]:
        return [Observation(ratio, 1.0, label)]

    def test_corpus_then_trials(self):
        totals = RatioTotals(bound_constant=1.0)
        run_plan(totals, self._plan(0.5), self._evaluate, tol=1e-9, workers=1)
        assert totals.instances == 6
        assert totals.worst_ratio == 0.5

    def test_corpus_violation_stops_the_run(self):
        calls: list[str] = []

        def evaluate(label: str, ratio: float) -> list[Observation]:
            calls.append(label)
            return [Observation(ratio, 1.0, label)]

        totals = RatioTotals(bound_constant=1.0)
        run_plan(totals, self._plan(3.0), evaluate, tol=1e-9, workers=2)
        assert calls == ["fixed"]
        assert "corpus violation; random trials not run" in totals.notes

    def test_fold_honours_skip_and_note(self):
        totals = RatioTotals(bound_constant=1.0)
        fold(
            totals,
            [
                [Observation(1.0, 1.0, "a", skip="overflow")],
                [Observation(0.2, 1.0, "b", note="note b")],
            ],
        )
        assert totals.skipped == 1
        assert totals.instances == 1
        assert totals.notes == ["skipped: overflow", "note b"]


class TestCorpus:
    def test_trial_inputs_depend_only_on_seed_and_index(self):
        label, f = trial_function(3, 5, 4)
        label_again, g = trial_function(3, 5, 4)
        assert label == label_again == "random[5] (level)"
        assert f.allclose(g, atol=0.0)
        assert not trial_function(3, 6, 4)[1].allclose(f)

    def test_level_ensemble_has_one_level(self):
        _, f = trial_function(0, 2, 4, real=True)
        weights = np.bincount(
            [bin(m).count("1") for m in np.flatnonzero(np.abs(f.coeffs) > 0)], minlength=5
        )
        assert np.count_nonzero(weights) == 1
        assert np.allclose(f.values.imag, 0.0)

    def test_cube_corpus_is_real(self):
        corpus = cube_corpus(3)
        labels = [label for label, _ in corpus]
        assert labels[:3] == ["walsh{1..1}", "walsh{1..2}", "walsh{1..3}"]
        assert labels[-1] == "constant"
        for _, f in corpus:
            assert np.allclose(f.values.imag, 0.0)

    def test_car_corpus(self):
        labels = [label for label, _ in car_corpus(2)]
        assert labels == ["Q′_{1..1}", "Q′_{1..2}", "Σ_j (j/n) Q′_j", "identity"]

    def test_random_pauli_words_are_distinct(self):
        a = random_pauli_element(trial_rng(0, 0), 2, 40)
        assert a.num_terms == 16

    def test_describe_function(self):
        f = CubeFunction.constant(2, 1.0) + CubeFunction.walsh(2, [2]) * 3.0
        assert describe_function(f) == {
            "kind": "cube_function",
            "n": 2,
            "coeffs": {"∅": [1.0, 0.0], "2": [3.0, 0.0]},
        }
