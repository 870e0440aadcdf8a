import math

import numpy as np
import pytest

from torquelearn.hpo import (CatDim, FloatDim, IntDim, SearchSpace, Study, Trial,
                             _split_completed, default_space, load_study, run_study,
                             save_study, study_from_dict, study_to_dict, suggest)
from torquelearn.nn_core import TrainingDiverged


def _completed_study(values, seed=5, x_of=None):
    """A study over one float dim with the given objective history."""
    space = SearchSpace((FloatDim("x", 0.0, 1.0),))
    study = Study(space=space, seed=seed)
    for k, v in enumerate(values):
        x = x_of(k) if x_of else (k + 0.5) / (len(values) + 1)
        study.trials.append(Trial(number=k, params={"x": x}, value=float(v),
                                  status="complete", seed=0))
    return study


class TestSuggest:
    def test_startup_is_uniform_and_in_bounds(self):
        space = default_space("single")
        study = Study(space=space, seed=1)
        params = suggest(study)
        assert 10 <= params["hidden"] <= 50
        assert 1e-4 <= params["learning_rate"] <= 1e-1
        assert params["optimizer"] in ("sgd", "adam", "rmsprop")
        # fresh study with the same seed draws the same startup point
        again = suggest(Study(space=space, seed=1))
        assert again == params

    def test_bounds_hold_across_1000_suggestions(self):
        space = default_space("single")
        study = Study(space=space, seed=1)
        rng = np.random.default_rng(0)
        for k in range(1000):
            params = suggest(study)
            assert 10 <= params["hidden"] <= 50
            assert 1e-4 <= params["learning_rate"] <= 1e-1
            assert params["optimizer"] in ("sgd", "adam", "rmsprop")
            study.trials.append(Trial(number=k, params=params,
                                      value=float(rng.normal()),
                                      status="complete", seed=0))

    def test_good_bad_partition_sizes(self):
        for k in (3, 4, 5, 9, 16):
            study = _completed_study(np.arange(k, dtype=float))
            good, bad = _split_completed(study.completed())
            assert len(good) == max(1, math.ceil(0.25 * k))
            assert len(good) + len(bad) == k

    def test_rank_based_split_ignores_objective_scale(self):
        values = [3.0, 1.0, 2.5, 0.2, 4.0, 1.7]
        study_lin = _completed_study(values, seed=9)
        study_exp = _completed_study(np.exp(values), seed=9)
        assert suggest(study_lin) == suggest(study_exp)

    def test_model_phase_concentrates_near_good_region(self):
        # objective = x itself: good trials cluster near 0, so suggestions
        # should land below the uniform midpoint on average
        rng = np.random.default_rng(2)
        xs = rng.uniform(0.0, 1.0, 30)
        study = _completed_study(xs, x_of=lambda k: xs[k])
        draws = [suggest(study)["x"] for _ in range(40)]
        assert np.mean(draws) < 0.4

    def test_empty_space_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            SearchSpace(())


class TestRunStudy:
    def test_trial_bookkeeping(self):
        space = SearchSpace((FloatDim("x", 0.0, 1.0),))
        study = run_study(lambda p, seed: (p["x"] - 0.3) ** 2, space, 10, seed=0)
        assert len(study.trials) == 10
        values = [t.value for t in study.trials]
        assert study.best_trial.value == min(values)

    def test_constant_objective_ties_break_by_index(self):
        space = SearchSpace((FloatDim("x", 0.0, 1.0),))
        study = run_study(lambda p, seed: 1.0, space, 6, seed=3)
        assert study.best_index == 0

    def test_deterministic_rerun(self):
        space = default_space("single")

        def objective(params, seed):
            return params["learning_rate"] * params["hidden"]

        a = run_study(objective, space, 8, seed=4)
        b = run_study(objective, space, 8, seed=4)
        assert [t.params for t in a.trials] == [t.params for t in b.trials]
        assert [t.value for t in a.trials] == [t.value for t in b.trials]

    def test_failed_trials_excluded_from_fitting(self):
        space = SearchSpace((FloatDim("x", 0.0, 1.0),))

        def objective(params, seed):
            if params["x"] > 0.5:
                raise TrainingDiverged(1)
            return params["x"]

        study = run_study(objective, space, 12, seed=1)
        failed = [t for t in study.trials if t.status == "failed"]
        assert failed and all(t.value is None for t in failed)
        assert study.best_trial.status == "complete"
        # the density fit only sees completed trials
        good, bad = _split_completed(study.completed())
        assert all(t.status == "complete" for t in good + bad)

    def test_all_failed_study_has_no_best(self):
        space = SearchSpace((FloatDim("x", 0.0, 1.0),))

        def objective(params, seed):
            raise TrainingDiverged(1)

        study = run_study(objective, space, 4, seed=0)
        assert study.best_index is None
        assert study.best_trial is None

    def test_non_finite_objective_marks_failure(self):
        space = SearchSpace((FloatDim("x", 0.0, 1.0),))
        study = run_study(lambda p, seed: float("nan"), space, 3, seed=0)
        assert all(t.status == "failed" for t in study.trials)


class TestQuadraticBenchmark:
    def test_tpe_not_worse_than_random(self):
        space = SearchSpace((FloatDim("x", 0.0, 1.0),))
        objective = lambda p, seed: (p["x"] - 0.3) ** 2
        tpe_best, rnd_best = [], []
        for seed in range(10):
            study = run_study(objective, space, 30, seed=seed)
            tpe_best.append(min(t.value for t in study.trials))
            draws = np.random.default_rng(seed).uniform(0.0, 1.0, 30)
            rnd_best.append(((draws - 0.3) ** 2).min())
        assert np.median(tpe_best) <= np.median(rnd_best)


class TestSerialization:
    def test_round_trip(self, tmp_path):
        space = default_space("cascade")

        def objective(params, seed):
            return sum(params[f"hidden_{g}"] for g in "abc") * params["learning_rate"]

        study = run_study(objective, space, 5, seed=6)
        path = tmp_path / "study.json"
        save_study(study, path)
        again = load_study(path)
        assert again.best_index == study.best_index
        assert [t.params for t in again.trials] == [t.params for t in study.trials]

    def test_wall_clock_not_serialized(self):
        space = SearchSpace((FloatDim("x", 0.0, 1.0),))
        study = run_study(lambda p, seed: p["x"], space, 3, seed=0)
        payload = study_to_dict(study)
        assert "wall_seconds" not in payload["trials"][0]

    def test_format_tag_checked(self):
        with pytest.raises(ValueError, match="study"):
            study_from_dict({"format": "something-else"})


class TestDimensionValidation:
    def test_bounds_must_be_ordered(self):
        with pytest.raises(ValueError):
            FloatDim("x", 1.0, 0.0)
        with pytest.raises(ValueError):
            IntDim("n", 5, 5)

    def test_log_dimension_needs_positive_low(self):
        with pytest.raises(ValueError):
            FloatDim("lr", 0.0, 1.0, log=True)

    def test_categorical_needs_two_choices(self):
        with pytest.raises(ValueError):
            CatDim("opt", ("adam",))
