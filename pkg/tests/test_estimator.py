import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from torquelearn.estimator import TorqueRegressor
from torquelearn.preprocessing import FeaturePolicy


@pytest.fixture(scope="module")
def xy(small_dataset):
    X = np.hstack([small_dataset.q, small_dataset.qd, small_dataset.qdd])
    return X, small_dataset.tau.copy()


def test_get_params_set_params_clone_round_trip():
    est = TorqueRegressor(architecture="cascade", learning_rate=0.01, epochs=3)
    params = est.get_params()
    assert params["architecture"] == "cascade"
    assert params["learning_rate"] == 0.01
    cloned = clone(est)
    assert cloned.get_params() == params
    est.set_params(optimizer="rmsprop")
    assert est.get_params()["optimizer"] == "rmsprop"


def test_fit_predict_shapes(xy):
    X, y = xy
    est = TorqueRegressor(epochs=2, random_state=1).fit(X, y)
    pred = est.predict(X[:20])
    assert pred.shape == (20, 6)
    assert est.feature_names_ == FeaturePolicy().feature_names()
    assert np.isfinite(pred).all()


def test_drop_joint6_narrows_outputs(xy):
    X, y = xy
    est = TorqueRegressor(epochs=2, drop_joint6=True).fit(X, y)
    assert est.predict(X[:5]).shape == (5, 5)
    assert est.target_names_ == ("tau1", "tau2", "tau3", "tau4", "tau5")
    # score accepts the full 6-column target and projects it
    assert np.isfinite(est.score(X[:200], y[:200]))


def test_learns_something(xy):
    X, y = xy
    n = int(len(X) * 0.7)
    est = TorqueRegressor(epochs=10, random_state=0).fit(X[:n], y[:n])
    # plenty of signal in the big torques; demand a clearly-positive R^2
    assert est.score(X[n:], y[n:]) > 0.5


def test_eval_set_builds_test_curve(xy):
    X, y = xy
    n = int(len(X) * 0.7)
    est = TorqueRegressor(epochs=4).fit(X[:n], y[:n], eval_set=(X[n:], y[n:]))
    assert len(est.history_.test_mse) == 4


def test_unfitted_predict_raises(xy):
    X, _ = xy
    with pytest.raises(NotFittedError):
        TorqueRegressor().predict(X[:2])


def test_wrong_column_count_rejected(xy):
    X, y = xy
    est = TorqueRegressor(epochs=1)
    with pytest.raises(ValueError, match="columns"):
        est.fit(X[:, :17], y)


def test_mse_matches_manual(xy):
    X, y = xy
    n = 1500
    est = TorqueRegressor(epochs=2).fit(X[:n], y[:n])
    manual = float(np.mean((est.predict(X[:n]) - y[:n]) ** 2))
    assert est.mse(X[:n], y[:n]) == pytest.approx(manual, rel=1e-12)


def test_scalar_hidden_broadcasts_for_grouped(xy):
    X, y = xy
    est = TorqueRegressor(architecture="multiple", hidden_sizes=8, epochs=1).fit(
        X[:500], y[:500])
    assert [w.layer_sizes[1] for w in est.model_.wirings] == [8, 8, 8]
