"""Bootstrap ensembles of CART trees with per-split feature subsampling.

Every tree owns a child stream spawned deterministically from the master
seed, so fits are reproducible regardless of how trees are scheduled.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin

from .base import as_matrix, check_X_y, require_fitted
from .tree import TreeNode, grow_tree, tree_apply


def _tree_rngs(seed: int, n_trees: int) -> list[np.random.Generator]:
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(n_trees)]


class _ForestBase(BaseEstimator):
    def __init__(self, n_trees=25, max_depth=None, min_samples_split=2, max_features=None, bootstrap=True, seed=0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed

    _criterion = "gini"

    def _fit_trees(self, X: np.ndarray, y: np.ndarray) -> None:
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        n, d = X.shape
        max_features = self.max_features if self.max_features is not None else math.ceil(math.sqrt(d))
        if not 1 <= max_features <= d:
            raise ValueError(f"max_features must be in [1, {d}]")
        trees = []
        for rng in _tree_rngs(self.seed, self.n_trees):
            idx = rng.integers(0, n, size=n) if self.bootstrap else np.arange(n)
            trees.append(
                grow_tree(
                    X,
                    y,
                    idx,
                    criterion=self._criterion,
                    max_depth=self.max_depth,
                    min_samples_split=self.min_samples_split,
                    feature_rng=rng,
                    max_features=max_features,
                )
            )
        self.trees_ = trees
        self.n_features_in_ = d

    def _fitted_payload(self) -> dict:
        return {"trees": [t.to_dict() for t in self.trees_], "n_features_in": self.n_features_in_}

    def _restore(self, payload: dict) -> None:
        self.trees_ = [TreeNode.from_dict(t) for t in payload["trees"]]
        self.n_features_in_ = payload["n_features_in"]


class RandomForestClassifier(_ForestBase, ClassifierMixin):
    """Majority vote over bootstrapped CART trees; ties go to class 0."""

    _criterion = "gini"

    def fit(self, X, y):
        X, y = check_X_y(X, y, classification=True)
        self._fit_trees(X, y)
        return self

    def predict_proba(self, X) -> np.ndarray:
        """Fraction of trees voting for class 1."""
        require_fitted(self, "trees_")
        X = as_matrix(X)
        votes = np.zeros(X.shape[0])
        for tree in self.trees_:
            votes += np.array([leaf.label for leaf in tree_apply(tree, X)])
        return votes / len(self.trees_)

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) > 0.5).astype(np.int64)


class RandomForestRegressor(_ForestBase, RegressorMixin):
    """Mean prediction over bootstrapped variance-split CART trees."""

    _criterion = "variance"

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        self._fit_trees(X, y)
        return self

    def predict(self, X) -> np.ndarray:
        require_fitted(self, "trees_")
        X = as_matrix(X)
        total = np.zeros(X.shape[0])
        for tree in self.trees_:
            total += np.array([leaf.value for leaf in tree_apply(tree, X)])
        return total / len(self.trees_)
