import numpy as np
import pytest

from newsdiffusion.datagen import linear_regression_dataset, two_gaussian_dataset
from newsdiffusion.ml import (
    DecisionTreeClassifier,
    GBDTClassifier,
    GBDTRegressor,
    RandomForestClassifier,
    RandomForestRegressor,
)
from newsdiffusion.metrics import regression_metrics


class TestRandomForest:
    def test_degenerate_forest_equals_tree(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(40, 3))
        y = (X[:, 0] + X[:, 1] > 0).astype(int)
        forest = RandomForestClassifier(n_trees=1, max_features=3, bootstrap=False, seed=9).fit(X, y)
        tree = DecisionTreeClassifier().fit(X, y)
        probe = rng.normal(size=(60, 3))
        assert np.array_equal(forest.predict(probe), tree.predict(probe))

    def test_two_gaussian_accuracy(self):
        X, y = two_gaussian_dataset(n=700, seed=42)
        X_train, y_train = X[:500], y[:500]
        X_test, y_test = X[500:], y[500:]
        model = RandomForestClassifier(n_trees=25, seed=42).fit(X_train, y_train)
        assert (model.predict(X_test) == y_test).mean() >= 0.95

    def test_same_seed_identical_forest(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(50, 4))
        y = rng.integers(0, 2, size=50)
        y[:2] = [0, 1]
        probe = rng.normal(size=(30, 4))
        a = RandomForestClassifier(n_trees=7, seed=3).fit(X, y)
        b = RandomForestClassifier(n_trees=7, seed=3).fit(X, y)
        assert np.array_equal(a.predict_proba(probe), b.predict_proba(probe))

    def test_vote_fraction_probability(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(30, 2))
        y = (X[:, 0] > 0).astype(int)
        model = RandomForestClassifier(n_trees=5, seed=0).fit(X, y)
        probas = model.predict_proba(X)
        assert np.all(np.isin(np.round(probas * 5), np.arange(6)))

    def test_vote_tie_goes_to_class_zero(self):
        model = RandomForestClassifier(n_trees=2, seed=0)
        model.trees_ = []  # hand-built two-leaf stub forest
        from newsdiffusion.ml.tree import TreeNode

        model.trees_ = [TreeNode(value=1.0, label=1), TreeNode(value=0.0, label=0)]
        model.n_features_in_ = 1
        X = np.zeros((3, 1))
        assert model.predict_proba(X).tolist() == [0.5, 0.5, 0.5]
        assert model.predict(X).tolist() == [0, 0, 0]

    def test_n_trees_validated(self):
        with pytest.raises(ValueError):
            RandomForestClassifier(n_trees=0).fit(np.zeros((4, 1)), [0, 1, 0, 1])

    def test_regressor_mean_of_trees(self):
        X, y = linear_regression_dataset(n=120, seed=2)
        model = RandomForestRegressor(n_trees=10, seed=2).fit(X, y)
        predictions = model.predict(X)
        assert regression_metrics(y, predictions)["r2"] > 0.8


class TestGbdt:
    def test_zero_estimators_predicts_mean(self):
        X = np.array([[0.0], [1.0], [2.0]])
        y = np.array([1.0, 2.0, 6.0])
        model = GBDTRegressor(n_estimators=0).fit(X, y)
        assert np.allclose(model.predict(X), y.mean())

    def test_linear_signal_r2(self):
        X, y = linear_regression_dataset(n=200, slope=3.0, noise=0.1, seed=0)
        X_train, y_train = X[:150], y[:150]
        X_test, y_test = X[150:], y[150:]
        model = GBDTRegressor(n_estimators=100, learning_rate=0.1).fit(X_train, y_train)
        assert regression_metrics(y_test, model.predict(X_test))["r2"] >= 0.9

    def test_separable_classification(self):
        rng = np.random.default_rng(3)
        x = np.concatenate([rng.uniform(-2, -0.5, 60), rng.uniform(0.5, 2, 60)])
        y = np.concatenate([np.zeros(60, dtype=int), np.ones(60, dtype=int)])
        model = GBDTClassifier(n_estimators=50).fit(x.reshape(-1, 1), y)
        assert (model.predict(x.reshape(-1, 1)) == y).mean() == 1.0

    def test_training_loss_non_increasing(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(80, 3))
        y = X @ np.array([1.0, -2.0, 0.5]) + rng.normal(0, 0.2, 80)
        model = GBDTRegressor(n_estimators=40, learning_rate=0.5).fit(X, y)
        losses = model.training_loss_
        assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))

    def test_parameter_validation(self):
        X = np.array([[0.0], [1.0]])
        y = np.array([0, 1])
        with pytest.raises(ValueError):
            GBDTClassifier(n_estimators=-1).fit(X, y)
        with pytest.raises(ValueError):
            GBDTClassifier(n_bins=1).fit(X, y)

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            GBDTClassifier().fit(np.zeros((4, 1)), np.zeros(4))

    def test_probability_range(self):
        X, y = two_gaussian_dataset(n=200, seed=1)
        model = GBDTClassifier(n_estimators=30).fit(X, y)
        probas = model.predict_proba(X)
        assert np.all((probas >= 0) & (probas <= 1))
