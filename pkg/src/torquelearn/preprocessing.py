"""Feature selection and standardization.

Input columns follow the fixed order q1..q6, dq1..dq6, ddq1..ddq6; targets
are tau1..tau6.  A FeaturePolicy drops q1 (it carries no information about
the torques when the base joint's placement is symmetric) and, optionally,
everything related to joint 6 whose measurements are the least reliable.

Standardization maps each column to zero mean and unit standard deviation
using statistics of the training split only; the test split is always
transformed with the train-fitted scaler.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .acquisition import Dataset
from .validation import as_matrix

FEATURE_NAMES = tuple(f"{kind}{j}" for kind in ("q", "dq", "ddq") for j in range(1, 7))
TARGET_NAMES = tuple(f"tau{j}" for j in range(1, 7))


@dataclass(frozen=True)
class FeaturePolicy:
    """Which state columns feed the regressors and how targets are treated."""

    drop_q1: bool = True
    drop_joint6: bool = False
    standardize_targets: bool = True

    def feature_names(self) -> tuple[str, ...]:
        dropped = set()
        if self.drop_q1:
            dropped.add("q1")
        if self.drop_joint6:
            dropped.update({"q6", "dq6", "ddq6"})
        return tuple(n for n in FEATURE_NAMES if n not in dropped)

    def target_names(self) -> tuple[str, ...]:
        if self.drop_joint6:
            return TARGET_NAMES[:5]
        return TARGET_NAMES

    @property
    def n_inputs(self) -> int:
        return len(self.feature_names())

    @property
    def n_targets(self) -> int:
        return len(self.target_names())


def select_features(dataset: Dataset, policy: FeaturePolicy) -> tuple[np.ndarray, np.ndarray]:
    """Project the dataset onto the policy's feature and target columns.

    Pure column selection: row count and values are untouched.  Returns
    (X, Y) with columns ordered per policy.feature_names()/target_names().
    """
    full = np.hstack([dataset.q, dataset.qd, dataset.qdd])
    feat_idx = [FEATURE_NAMES.index(name) for name in policy.feature_names()]
    targ_idx = [TARGET_NAMES.index(name) for name in policy.target_names()]
    return full[:, feat_idx].copy(), dataset.tau[:, targ_idx].copy()


class Standardizer(TransformerMixin, BaseEstimator):
    """Per-column zero-mean unit-variance scaling, population (1/n) variance.

    Columns with standard deviation below 1e-12 are treated as constant:
    their scale is forced to 1 (with a warning) so the transformed column
    becomes all zeros instead of exploding.
    """

    def fit(self, X, y=None):
        X = as_matrix("X", X)
        if X.shape[0] < 2:
            raise ValueError("standardizer needs at least 2 rows to fit")
        self.mean_ = X.mean(axis=0)
        scale = X.std(axis=0)  # population divisor n
        degenerate = scale < 1e-12
        if degenerate.any():
            cols = ", ".join(str(i) for i in np.flatnonzero(degenerate))
            warnings.warn(f"constant column(s) {cols}: scale forced to 1", stacklevel=2)
            scale = np.where(degenerate, 1.0, scale)
        self.scale_ = scale
        self.n_features_in_ = X.shape[1]
        return self

    def _check_fitted(self, X, name):
        X = as_matrix(name, X)
        if not hasattr(self, "mean_"):
            raise ValueError("standardizer is not fitted")
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"{name} has {X.shape[1]} columns, scaler was fitted on {self.n_features_in_}")
        return X

    def transform(self, X):
        X = self._check_fitted(X, "X")
        return (X - self.mean_) / self.scale_

    def inverse_transform(self, X):
        X = self._check_fitted(X, "X")
        return self.mean_ + self.scale_ * X

    def to_dict(self) -> dict:
        return {"mean": [float(v) for v in self.mean_],
                "scale": [float(v) for v in self.scale_]}

    @classmethod
    def from_dict(cls, payload: dict) -> "Standardizer":
        scaler = cls()
        scaler.mean_ = np.asarray(payload["mean"], dtype=np.float64)
        scaler.scale_ = np.asarray(payload["scale"], dtype=np.float64)
        scaler.n_features_in_ = scaler.mean_.shape[0]
        return scaler
