import numpy as np
import pytest

from newsdiffusion.datagen import linear_regression_dataset, two_gaussian_dataset
from newsdiffusion.ml import (
    DecisionTreeClassifier,
    DecisionTreeRegressor,
    GBDTClassifier,
    GBDTRegressor,
    LinearSVMClassifier,
    LogisticRegression,
    RandomForestClassifier,
    RandomForestRegressor,
    load_model,
    model_kind,
    save_model,
)

CLASSIFIERS = [
    DecisionTreeClassifier(max_depth=4),
    RandomForestClassifier(n_trees=5, seed=1),
    GBDTClassifier(n_estimators=10),
    LogisticRegression(n_epochs=50),
    LinearSVMClassifier(n_epochs=5, seed=2),
]

REGRESSORS = [
    DecisionTreeRegressor(max_depth=4),
    RandomForestRegressor(n_trees=5, seed=1),
    GBDTRegressor(n_estimators=10),
]


@pytest.mark.parametrize("model", CLASSIFIERS, ids=lambda m: type(m).__name__)
def test_classifier_round_trip_bit_exact(model, tmp_path):
    X, y = two_gaussian_dataset(n=120, seed=3)
    model.fit(X, y)
    path = tmp_path / "model.json"
    save_model(model, path)
    loaded = load_model(path)
    probe, _ = two_gaussian_dataset(n=60, seed=4)
    assert np.array_equal(loaded.predict(probe), model.predict(probe))
    assert np.array_equal(loaded.predict_proba(probe), model.predict_proba(probe))
    assert loaded.get_params() == model.get_params()


@pytest.mark.parametrize("model", REGRESSORS, ids=lambda m: type(m).__name__)
def test_regressor_round_trip_bit_exact(model, tmp_path):
    X, y = linear_regression_dataset(n=100, seed=5)
    model.fit(X, y)
    path = tmp_path / "model.json"
    save_model(model, path)
    loaded = load_model(path)
    probe, _ = linear_regression_dataset(n=40, seed=6)
    assert np.array_equal(loaded.predict(probe), model.predict(probe))


def test_model_kind_registry():
    assert model_kind(RandomForestClassifier()) == "random_forest"
    assert model_kind(GBDTRegressor()) == "gbdt_regressor"
    with pytest.raises(ValueError):
        model_kind(object())
