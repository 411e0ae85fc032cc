"""From-scratch supervised learners with seeded determinism."""

from .base import Dataset, check_X_y
from .forest import RandomForestClassifier, RandomForestRegressor
from .gbdt import GBDTClassifier, GBDTRegressor
from .linear import LinearSVMClassifier, LogisticRegression, logistic_loss_grad
from .persist import (
    CLASSIFIER_KINDS,
    MODEL_KINDS,
    REGRESSOR_KINDS,
    load_model,
    model_from_dict,
    model_kind,
    model_to_dict,
    save_model,
)
from .split import split_indices, train_test_split
from .tree import DecisionTreeClassifier, DecisionTreeRegressor

__all__ = [
    "Dataset",
    "check_X_y",
    "DecisionTreeClassifier",
    "DecisionTreeRegressor",
    "RandomForestClassifier",
    "RandomForestRegressor",
    "GBDTClassifier",
    "GBDTRegressor",
    "LogisticRegression",
    "LinearSVMClassifier",
    "logistic_loss_grad",
    "train_test_split",
    "split_indices",
    "save_model",
    "load_model",
    "model_to_dict",
    "model_from_dict",
    "model_kind",
    "MODEL_KINDS",
    "CLASSIFIER_KINDS",
    "REGRESSOR_KINDS",
]
