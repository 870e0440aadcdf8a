import numpy as np
import pytest

from torquelearn.preprocessing import (FEATURE_NAMES, TARGET_NAMES, FeaturePolicy,
                                       Standardizer, select_features)


class TestFeaturePolicy:
    def test_default_drops_q1(self):
        policy = FeaturePolicy()
        assert policy.n_inputs == 17
        assert "q1" not in policy.feature_names()
        assert policy.n_targets == 6

    def test_full_columns(self):
        policy = FeaturePolicy(drop_q1=False)
        assert policy.n_inputs == 18
        assert policy.feature_names() == FEATURE_NAMES

    def test_joint6_removal(self):
        policy = FeaturePolicy(drop_q1=True, drop_joint6=True)
        assert policy.n_inputs == 14
        assert policy.n_targets == 5
        assert policy.target_names() == TARGET_NAMES[:5]
        policy = FeaturePolicy(drop_q1=False, drop_joint6=True)
        assert policy.n_inputs == 15

    def test_selection_is_pure_projection(self, small_dataset):
        policy = FeaturePolicy()
        X, Y = select_features(small_dataset, policy)
        assert X.shape == (len(small_dataset), 17)
        assert Y.shape == (len(small_dataset), 6)
        np.testing.assert_array_equal(X[:, 0], small_dataset.q[:, 1])   # q2 first
        np.testing.assert_array_equal(X[:, 5], small_dataset.qd[:, 0])  # then dq1
        np.testing.assert_array_equal(Y, small_dataset.tau)


class TestStandardizer:
    def test_direct_arithmetic(self):
        X = np.array([[1.0], [2.0], [3.0]])
        scaler = Standardizer().fit(X)
        assert scaler.mean_[0] == pytest.approx(2.0)
        assert scaler.scale_[0] == pytest.approx(np.sqrt(2.0 / 3.0))  # population

    def test_constant_column_guarded(self):
        X = np.column_stack([np.full(5, 5.0), np.arange(5.0)])
        with pytest.warns(UserWarning, match="constant column"):
            scaler = Standardizer().fit(X)
        assert scaler.scale_[0] == 1.0
        np.testing.assert_allclose(scaler.transform(X)[:, 0], 0.0)

    def test_fit_transform_statistics(self, rng):
        X = rng.normal(3.0, 7.0, size=(400, 6))
        scaler = Standardizer().fit(X)
        Z = scaler.transform(X)
        assert np.abs(Z.mean(axis=0)).max() < 1e-9
        assert np.abs(Z.std(axis=0) - 1.0).max() < 1e-9

    def test_row_of_means_maps_to_zero(self, rng):
        X = rng.normal(size=(50, 4))
        scaler = Standardizer().fit(X)
        np.testing.assert_allclose(scaler.transform(X.mean(axis=0)[None, :]), 0.0,
                                   atol=1e-12)

    def test_round_trip(self, rng):
        X = rng.normal(size=(100, 5)) * rng.uniform(0.5, 20.0, 5)
        scaler = Standardizer().fit(X)
        back = scaler.inverse_transform(scaler.transform(X))
        assert np.abs(back - X).max() < 1e-12

    def test_test_split_uses_train_statistics(self, rng):
        X_train = rng.normal(2.0, 3.0, size=(200, 4))
        X_test = rng.normal(-1.0, 9.0, size=(80, 4))
        scaler = Standardizer().fit(X_train)
        expected = (X_test - X_train.mean(axis=0)) / X_train.std(axis=0)
        np.testing.assert_allclose(scaler.transform(X_test), expected)

    def test_dimension_mismatch_rejected(self, rng):
        scaler = Standardizer().fit(rng.normal(size=(10, 3)))
        with pytest.raises(ValueError, match="columns"):
            scaler.transform(rng.normal(size=(10, 4)))

    def test_too_few_rows_rejected(self):
        with pytest.raises(ValueError):
            Standardizer().fit(np.ones((1, 3)))

    def test_dict_round_trip(self, rng):
        scaler = Standardizer().fit(rng.normal(size=(30, 2)))
        again = Standardizer.from_dict(scaler.to_dict())
        X = rng.normal(size=(5, 2))
        np.testing.assert_array_equal(again.transform(X), scaler.transform(X))
