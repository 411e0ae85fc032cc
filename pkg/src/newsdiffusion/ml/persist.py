"""JSON persistence for every learner; reload reproduces predictions exactly.

A model document is {"kind", "params", "state"}: the constructor
parameters plus the fitted state. Floats survive the JSON round trip
bit-exactly, so reloaded models predict identically.
"""

from __future__ import annotations

import json
from pathlib import Path

from .forest import RandomForestClassifier, RandomForestRegressor
from .gbdt import GBDTClassifier, GBDTRegressor
from .linear import LinearSVMClassifier, LogisticRegression
from .tree import DecisionTreeClassifier, DecisionTreeRegressor

MODEL_KINDS = {
    "decision_tree": DecisionTreeClassifier,
    "decision_tree_regressor": DecisionTreeRegressor,
    "random_forest": RandomForestClassifier,
    "random_forest_regressor": RandomForestRegressor,
    "gbdt": GBDTClassifier,
    "gbdt_regressor": GBDTRegressor,
    "logistic_regression": LogisticRegression,
    "linear_svm": LinearSVMClassifier,
}

_KIND_BY_CLASS = {cls: kind for kind, cls in MODEL_KINDS.items()}

CLASSIFIER_KINDS = ("decision_tree", "random_forest", "gbdt", "logistic_regression", "linear_svm")
REGRESSOR_KINDS = ("random_forest_regressor", "gbdt_regressor")


def model_kind(model) -> str:
    kind = _KIND_BY_CLASS.get(type(model))
    if kind is None:
        raise ValueError(f"unknown model type {type(model).__name__}")
    return kind


def model_to_dict(model) -> dict:
    return {
        "kind": model_kind(model),
        "params": model.get_params(),
        "state": model._fitted_payload(),
    }


def model_from_dict(payload: dict):
    cls = MODEL_KINDS.get(payload["kind"])
    if cls is None:
        raise ValueError(f"unknown model kind {payload['kind']!r}")
    model = cls(**payload["params"])
    model._restore(payload["state"])
    return model


def save_model(model, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)), encoding="utf-8")


def load_model(path: str | Path):
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
