"""Shared dataset container and input-validation helpers for the learners."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.exceptions import NotFittedError


@dataclass
class Dataset:
    """Design matrix with aligned targets and feature names."""

    X: np.ndarray
    y: np.ndarray
    feature_names: list[str]

    def validate(self, classification: bool = False) -> "Dataset":
        self.X, self.y = check_X_y(self.X, self.y, classification=classification)
        if len(self.feature_names) != self.X.shape[1]:
            raise ValueError("feature_names length does not match X columns")
        return self


def as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {X.shape}")
    return X


def check_X_y(X, y, *, classification: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Validate shapes and values: finite entries, n >= 1, binary labels
    (with both classes present) when classification is requested."""
    X = as_matrix(X)
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    if X.shape[0] < 1:
        raise ValueError("empty training set")
    if not np.isfinite(X).all() or not np.isfinite(y).all():
        raise ValueError("X and y must not contain NaN or Inf")
    if classification:
        values = np.unique(y)
        if not np.isin(values, (0.0, 1.0)).all():
            raise ValueError(f"binary targets must be 0/1, got {values}")
        if values.size < 2:
            raise ValueError("training data contains a single class")
        y = y.astype(np.int64)
    return X, y


def require_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(f"{type(estimator).__name__} instance is not fitted yet")
