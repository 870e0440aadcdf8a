"""Scikit-learn style front end for the torque models.

TorqueRegressor takes the raw 18-column state matrix (q1..q6, dq1..dq6,
ddq1..ddq6) and the 6-column torque matrix, applies the configured feature
policy and scaling internally, and exposes the usual fit/predict/get_params
surface so the model drops into sklearn pipelines and model selection tools.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .architectures import ArchitectureSpec, build, predict, train_architecture
from .nn_core import OptimizerConfig, TrainConfig
from .preprocessing import FEATURE_NAMES, TARGET_NAMES, FeaturePolicy, Standardizer
from .validation import as_matrix, require_finite, require_rows_match


class TorqueRegressor(RegressorMixin, BaseEstimator):
    """Joint-torque regressor over one of the three assemblies.

    Parameters mirror the experiment defaults: one hidden layer of 30 units
    (5/15/30 for the grouped assembly), Adam at 0.001, 10 epochs, batches of
    64, inputs and targets standardized on the fit data.
    """

    def __init__(self, architecture="single", hidden_sizes=None, optimizer="adam",
                 learning_rate=1e-3, epochs=10, batch_size=64, scale=True,
                 drop_q1=True, drop_joint6=False, cumulative_cascade=False,
                 shuffle_each_epoch=True, random_state=0):
        self.architecture = architecture
        self.hidden_sizes = hidden_sizes
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.scale = scale
        self.drop_q1 = drop_q1
        self.drop_joint6 = drop_joint6
        self.cumulative_cascade = cumulative_cascade
        self.shuffle_each_epoch = shuffle_each_epoch
        self.random_state = random_state

    def _resolved_hidden(self) -> tuple[int, ...]:
        if self.hidden_sizes is not None:
            sizes = self.hidden_sizes
            if np.isscalar(sizes):
                sizes = (sizes,) * (1 if self.architecture == "single" else 3)
            return tuple(int(h) for h in sizes)
        if self.architecture == "multiple":
            return (5, 15, 30)
        if self.architecture == "cascade":
            return (30, 30, 30)
        return (30,)

    def _policy(self) -> FeaturePolicy:
        return FeaturePolicy(drop_q1=self.drop_q1, drop_joint6=self.drop_joint6,
                             standardize_targets=self.scale)

    def _project(self, X, y=None):
        X = as_matrix("X", X, n_cols=len(FEATURE_NAMES))
        require_finite("X", X)
        policy = self._policy()
        feat_idx = [FEATURE_NAMES.index(n) for n in policy.feature_names()]
        Xp = X[:, feat_idx]
        if y is None:
            return Xp
        y = as_matrix("y", y)
        require_finite("y", y)
        require_rows_match("X", X, "y", y)
        if y.shape[1] == len(TARGET_NAMES):
            targ_idx = [TARGET_NAMES.index(n) for n in policy.target_names()]
            y = y[:, targ_idx]
        elif y.shape[1] != policy.n_targets:
            raise ValueError(f"y must have 6 or {policy.n_targets} columns")
        return Xp, y

    def fit(self, X, y, eval_set=None):
        """Train on all given rows; ``eval_set=(X, y)`` adds a test curve."""
        Xp, yp = self._project(X, y)
        if eval_set is not None:
            Xe, ye = self._project(eval_set[0], eval_set[1])
        else:
            Xe, ye = Xp, yp

        x_scaler = y_scaler = None
        Xt, yt, Xet, yet = Xp, yp, Xe, ye
        if self.scale:
            x_scaler = Standardizer().fit(Xp)
            y_scaler = Standardizer().fit(yp)
            Xt, yt = x_scaler.transform(Xp), y_scaler.transform(yp)
            Xet, yet = x_scaler.transform(Xe), y_scaler.transform(ye)

        spec = ArchitectureSpec(self.architecture, self._resolved_hidden(),
                                self._policy(), self.cumulative_cascade)
        model = build(spec)
        model.x_scaler, model.y_scaler = x_scaler, y_scaler
        opt = OptimizerConfig(self.optimizer, self.learning_rate)
        tc = TrainConfig(self.epochs, self.batch_size, self.shuffle_each_epoch,
                         seed=self.random_state)
        model, subnet_histories, combined = train_architecture(
            model, (Xt, yt), (Xet, yet), opt, tc)

        self.model_ = model
        self.history_ = combined
        self.subnet_histories_ = subnet_histories
        self.feature_names_ = spec.policy.feature_names()
        self.target_names_ = spec.policy.target_names()
        self.n_features_in_ = len(FEATURE_NAMES)
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError("this TorqueRegressor is not fitted yet")

    def predict(self, X):
        """Torques in N m for the retained joints, shape (n, n_targets)."""
        self._check_fitted()
        Xp = self._project(X)
        _, torque = predict(self.model_, Xp)
        return torque

    def score(self, X, y, sample_weight=None):
        """Uniform-average R^2 over the retained torque columns."""
        self._check_fitted()
        _, yp = self._project(X, y)
        pred = self.predict(X)
        ss_res = np.sum((yp - pred) ** 2, axis=0)
        ss_tot = np.sum((yp - yp.mean(axis=0)) ** 2, axis=0)
        ss_tot = np.where(ss_tot == 0.0, 1.0, ss_tot)
        return float(np.mean(1.0 - ss_res / ss_tot))

    def mse(self, X, y):
        """Mean squared error in N m units over the retained columns."""
        self._check_fitted()
        _, yp = self._project(X, y)
        diff = self.predict(X) - yp
        return float(np.mean(diff * diff))
