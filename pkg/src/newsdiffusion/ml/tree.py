"""CART decision trees with exhaustive midpoint split search.

Split selection scans features in ascending index order and thresholds
in ascending value order, keeping the first strictly best candidate.
Weighted Gini (classification) and weighted variance (regression) are
computed from exact counts/sums so the choice is reproducible and can
be checked against a brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin

from .base import check_X_y, as_matrix, require_fitted


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    value: float = 0.0  # leaf payload: class-1 fraction or mean target
    label: int = 0      # leaf majority class, ties -> 0 (classification)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"value": self.value, "label": self.label}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TreeNode":
        if "feature" not in payload:
            return cls(value=payload["value"], label=payload["label"])
        return cls(
            feature=payload["feature"],
            threshold=payload["threshold"],
            left=cls.from_dict(payload["left"]),
            right=cls.from_dict(payload["right"]),
        )


def _best_split_gini(x: np.ndarray, y: np.ndarray) -> tuple[float, float] | None:
    """(cost, threshold) of the best Gini split on one feature, or None."""
    n = x.size
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    boundaries = np.flatnonzero(xs[:-1] != xs[1:])
    if boundaries.size == 0:
        return None
    cum1 = np.cumsum(ys)
    tot1 = int(cum1[-1])
    nl = (boundaries + 1).astype(np.float64)
    nr = n - nl
    c1l = cum1[boundaries].astype(np.float64)
    c0l = nl - c1l
    c1r = tot1 - c1l
    c0r = (n - tot1) - c0l
    # explicit multiplies keep the arithmetic identical to a scalar oracle
    p0l, p1l = c0l / nl, c1l / nl
    p0r, p1r = c0r / nr, c1r / nr
    gini_left = 1.0 - p0l * p0l - p1l * p1l
    gini_right = 1.0 - p0r * p0r - p1r * p1r
    cost = (nl * gini_left + nr * gini_right) / n
    j = int(np.argmin(cost))
    i = int(boundaries[j])
    return float(cost[j]), float((xs[i] + xs[i + 1]) / 2)


def _best_split_variance(x: np.ndarray, y: np.ndarray) -> tuple[float, float] | None:
    """(cost, threshold) of the best variance split on one feature, or None."""
    n = x.size
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    boundaries = np.flatnonzero(xs[:-1] != xs[1:])
    if boundaries.size == 0:
        return None
    s1 = np.cumsum(ys)
    s2 = np.cumsum(ys * ys)
    nl = (boundaries + 1).astype(np.float64)
    nr = n - nl
    s1l = s1[boundaries]
    s2l = s2[boundaries]
    s1r = s1[-1] - s1l
    s2r = s2[-1] - s2l
    ml, mr = s1l / nl, s1r / nr
    var_left = s2l / nl - ml * ml
    var_right = s2r / nr - mr * mr
    cost = (nl * var_left + nr * var_right) / n
    j = int(np.argmin(cost))
    i = int(boundaries[j])
    return float(cost[j]), float((xs[i] + xs[i + 1]) / 2)


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    idx: np.ndarray,
    *,
    criterion: str,
    max_depth: int | None,
    min_samples_split: int,
    depth: int = 0,
    feature_rng: np.random.Generator | None = None,
    max_features: int | None = None,
) -> TreeNode:
    """Recursive CART growth over the rows selected by idx.

    When feature_rng is given, each split considers a fresh random subset
    of max_features features (drawn from that stream, scanned in
    ascending index order), as used by random forests.
    """
    node_y = y[idx]
    n = idx.size
    if criterion == "gini":
        c1 = int(node_y.sum())
        leaf = TreeNode(value=c1 / n, label=1 if c1 > n - c1 else 0)
        pure = c1 == 0 or c1 == n
    else:
        leaf = TreeNode(value=float(node_y.mean()))
        pure = bool(np.all(node_y == node_y[0]))
    if pure or n < min_samples_split or (max_depth is not None and depth >= max_depth):
        return leaf

    d = X.shape[1]
    if feature_rng is not None and max_features is not None and max_features < d:
        features = np.sort(feature_rng.choice(d, size=max_features, replace=False))
    else:
        features = np.arange(d)

    split_fn = _best_split_gini if criterion == "gini" else _best_split_variance
    best: tuple[float, int, float] | None = None
    for f in features:
        found = split_fn(X[idx, f], node_y)
        if found is None:
            continue
        cost, threshold = found
        if best is None or cost < best[0]:
            best = (cost, int(f), threshold)
    if best is None:
        return leaf

    _, feature, threshold = best
    mask = X[idx, feature] < threshold
    left_idx = idx[mask]
    right_idx = idx[~mask]
    if left_idx.size == 0 or right_idx.size == 0:  # fp-degenerate midpoint
        return leaf
    common = dict(
        criterion=criterion,
        max_depth=max_depth,
        min_samples_split=min_samples_split,
        feature_rng=feature_rng,
        max_features=max_features,
    )
    return TreeNode(
        feature=feature,
        threshold=threshold,
        left=grow_tree(X, y, left_idx, depth=depth + 1, **common),
        right=grow_tree(X, y, right_idx, depth=depth + 1, **common),
    )


def tree_apply(node: TreeNode, X: np.ndarray) -> list[TreeNode]:
    """Leaf reached by every row of X."""
    leaves = []
    for row in X:
        current = node
        while not current.is_leaf:
            current = current.left if row[current.feature] < current.threshold else current.right
        leaves.append(current)
    return leaves


class DecisionTreeClassifier(BaseEstimator, ClassifierMixin):
    """Binary CART classifier; leaves predict the majority class (ties -> 0)."""

    def __init__(self, max_depth: int | None = None, min_samples_split: int = 2, criterion: str = "gini"):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.criterion = criterion

    def fit(self, X, y):
        if self.criterion != "gini":
            raise ValueError("classification criterion must be 'gini'")
        X = as_matrix(X)
        y = np.asarray(y, dtype=np.float64).ravel()
        if X.shape[0] < 1:
            raise ValueError("empty training set")
        if not np.isin(np.unique(y), (0.0, 1.0)).all():
            raise ValueError("binary targets must be 0/1")
        if not np.isfinite(X).all():
            raise ValueError("X must not contain NaN or Inf")
        y = y.astype(np.int64)
        self.n_features_in_ = X.shape[1]
        self.tree_ = grow_tree(
            X,
            y,
            np.arange(X.shape[0]),
            criterion="gini",
            max_depth=self.max_depth,
            min_samples_split=self.min_samples_split,
        )
        return self

    def predict_proba(self, X) -> np.ndarray:
        require_fitted(self, "tree_")
        X = as_matrix(X)
        return np.array([leaf.value for leaf in tree_apply(self.tree_, X)])

    def predict(self, X) -> np.ndarray:
        require_fitted(self, "tree_")
        X = as_matrix(X)
        return np.array([leaf.label for leaf in tree_apply(self.tree_, X)], dtype=np.int64)

    def _fitted_payload(self) -> dict:
        return {"tree": self.tree_.to_dict(), "n_features_in": self.n_features_in_}

    def _restore(self, payload: dict) -> None:
        self.tree_ = TreeNode.from_dict(payload["tree"])
        self.n_features_in_ = payload["n_features_in"]


class DecisionTreeRegressor(BaseEstimator, RegressorMixin):
    """CART regressor minimizing weighted variance; leaves predict the mean."""

    def __init__(self, max_depth: int | None = None, min_samples_split: int = 2, criterion: str = "variance"):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.criterion = criterion

    def fit(self, X, y):
        if self.criterion != "variance":
            raise ValueError("regression criterion must be 'variance'")
        X, y = check_X_y(X, y)
        self.n_features_in_ = X.shape[1]
        self.tree_ = grow_tree(
            X,
            y,
            np.arange(X.shape[0]),
            criterion="variance",
            max_depth=self.max_depth,
            min_samples_split=self.min_samples_split,
        )
        return self

    def predict(self, X) -> np.ndarray:
        require_fitted(self, "tree_")
        X = as_matrix(X)
        return np.array([leaf.value for leaf in tree_apply(self.tree_, X)])

    def _fitted_payload(self) -> dict:
        return {"tree": self.tree_.to_dict(), "n_features_in": self.n_features_in_}

    def _restore(self, payload: dict) -> None:
        self.tree_ = TreeNode.from_dict(payload["tree"])
        self.n_features_in_ = payload["n_features_in"]
