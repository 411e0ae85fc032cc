"""Histogram-based gradient-boosted trees for classification and regression.

Features are pre-binned into at most n_bins quantile bins; each boosting
stage fits a regression tree to negative gradients by scanning bin
histograms for the split maximizing the gradient-sum gain. Leaf values
carry the learning rate, so prediction is the raw initial score plus the
sum of leaf values along each tree path (through a sigmoid for
classification).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin

from .base import as_matrix, check_X_y, require_fitted


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    expz = np.exp(z[~pos])
    out[~pos] = expz / (1.0 + expz)
    return out


class _BinMapper:
    """Quantile binning; transform maps raw values to small int bin ids."""

    def __init__(self, n_bins: int):
        self.n_bins = n_bins

    def fit(self, X: np.ndarray) -> "_BinMapper":
        cut_quantiles = np.linspace(0.0, 1.0, self.n_bins + 1)[1:-1]
        self.thresholds_ = [np.unique(np.quantile(X[:, f], cut_quantiles)) for f in range(X.shape[1])]
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        binned = np.empty(X.shape, dtype=np.int64)
        for f, thresholds in enumerate(self.thresholds_):
            binned[:, f] = np.searchsorted(thresholds, X[:, f], side="right")
        return binned

    def to_dict(self) -> dict:
        return {"n_bins": self.n_bins, "thresholds": [t.tolist() for t in self.thresholds_]}

    @classmethod
    def from_dict(cls, payload: dict) -> "_BinMapper":
        mapper = cls(payload["n_bins"])
        mapper.thresholds_ = [np.array(t, dtype=np.float64) for t in payload["thresholds"]]
        return mapper


@dataclass
class _HistNode:
    feature: int = -1
    bin_threshold: int = 0  # go left when bin_id <= bin_threshold
    left: "_HistNode | None" = None
    right: "_HistNode | None" = None
    value: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"value": self.value}
        return {
            "feature": self.feature,
            "bin_threshold": self.bin_threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "_HistNode":
        if "feature" not in payload:
            return cls(value=payload["value"])
        return cls(
            feature=payload["feature"],
            bin_threshold=payload["bin_threshold"],
            left=cls.from_dict(payload["left"]),
            right=cls.from_dict(payload["right"]),
        )


def _grow_hist_tree(
    binned: np.ndarray,
    gradients: np.ndarray,
    idx: np.ndarray,
    *,
    shrinkage: float,
    max_depth: int,
    min_samples_split: int,
    raw_updates: list[tuple[np.ndarray, float]],
    depth: int = 0,
) -> _HistNode:
    n = idx.size
    total = float(gradients[idx].sum())
    if depth >= max_depth or n < min_samples_split:
        value = shrinkage * (total / n)
        raw_updates.append((idx, value))
        return _HistNode(value=value)

    parent_score = total * total / n
    best_gain = parent_score + 1e-12
    best: tuple[int, int] | None = None
    for f in range(binned.shape[1]):
        bins = binned[idx, f]
        n_levels = int(bins.max()) + 1
        if n_levels < 2:
            continue
        counts = np.bincount(bins, minlength=n_levels)
        sums = np.bincount(bins, weights=gradients[idx], minlength=n_levels)
        cum_counts = np.cumsum(counts)
        cum_sums = np.cumsum(sums)
        for b in range(n_levels - 1):
            nl = cum_counts[b]
            if nl == 0 or nl == n:
                continue
            sl = cum_sums[b]
            sr = total - sl
            gain = sl * sl / nl + sr * sr / (n - nl)
            if gain > best_gain:
                best_gain = gain
                best = (f, b)
    if best is None:
        value = shrinkage * (total / n)
        raw_updates.append((idx, value))
        return _HistNode(value=value)

    feature, bin_threshold = best
    mask = binned[idx, feature] <= bin_threshold
    common = dict(
        shrinkage=shrinkage,
        max_depth=max_depth,
        min_samples_split=min_samples_split,
        raw_updates=raw_updates,
        depth=depth + 1,
    )
    return _HistNode(
        feature=feature,
        bin_threshold=bin_threshold,
        left=_grow_hist_tree(binned, gradients, idx[mask], **common),
        right=_grow_hist_tree(binned, gradients, idx[~mask], **common),
    )


def _hist_predict(trees: list[_HistNode], binned: np.ndarray, base: float) -> np.ndarray:
    raw = np.full(binned.shape[0], base)
    for i, row in enumerate(binned):
        for tree in trees:
            node = tree
            while not node.is_leaf:
                node = node.left if row[node.feature] <= node.bin_threshold else node.right
            raw[i] += node.value
    return raw


class _GbdtBase(BaseEstimator):
    def __init__(self, n_estimators=100, learning_rate=0.1, max_depth=3, n_bins=32, min_samples_split=2):
        self.n_estimators = n_estimators
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.n_bins = n_bins
        self.min_samples_split = min_samples_split

    def _validate(self) -> None:
        if self.n_estimators < 0:
            raise ValueError("n_estimators must be >= 0")
        if self.n_bins < 2:
            raise ValueError("n_bins must be >= 2")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")

    def _boost(self, X: np.ndarray, y: np.ndarray, base: float, loss: str) -> None:
        self.mapper_ = _BinMapper(self.n_bins).fit(X)
        binned = self.mapper_.transform(X)
        raw = np.full(X.shape[0], base)
        trees: list[_HistNode] = []
        losses = [self._loss_value(y, raw, loss)]
        for _ in range(self.n_estimators):
            gradients = y - _sigmoid(raw) if loss == "logistic" else y - raw
            updates: list[tuple[np.ndarray, float]] = []
            tree = _grow_hist_tree(
                binned,
                gradients,
                np.arange(X.shape[0]),
                shrinkage=self.learning_rate,
                max_depth=self.max_depth,
                min_samples_split=self.min_samples_split,
                raw_updates=updates,
            )
            for idx, value in updates:
                raw[idx] += value
            trees.append(tree)
            losses.append(self._loss_value(y, raw, loss))
        self.trees_ = trees
        self.base_score_ = base
        self.training_loss_ = losses
        self.n_features_in_ = X.shape[1]

    @staticmethod
    def _loss_value(y: np.ndarray, raw: np.ndarray, loss: str) -> float:
        if loss == "logistic":
            return float(np.mean(np.logaddexp(0.0, raw) - y * raw))
        return float(np.mean((y - raw) ** 2))

    def _raw_predict(self, X) -> np.ndarray:
        require_fitted(self, "trees_")
        X = as_matrix(X)
        return _hist_predict(self.trees_, self.mapper_.transform(X), self.base_score_)

    def _fitted_payload(self) -> dict:
        return {
            "trees": [t.to_dict() for t in self.trees_],
            "base_score": self.base_score_,
            "mapper": self.mapper_.to_dict(),
            "training_loss": self.training_loss_,
            "n_features_in": self.n_features_in_,
        }

    def _restore(self, payload: dict) -> None:
        self.trees_ = [_HistNode.from_dict(t) for t in payload["trees"]]
        self.base_score_ = payload["base_score"]
        self.mapper_ = _BinMapper.from_dict(payload["mapper"])
        self.training_loss_ = payload["training_loss"]
        self.n_features_in_ = payload["n_features_in"]


class GBDTClassifier(_GbdtBase, ClassifierMixin):
    """Boosted histogram trees on logistic loss; initial score is the
    log-odds of the training base rate."""

    def fit(self, X, y):
        self._validate()
        X, y = check_X_y(X, y, classification=True)
        rate = float(y.mean())
        base = math.log(rate / (1.0 - rate))
        self._boost(X, y.astype(np.float64), base, loss="logistic")
        return self

    def predict_proba(self, X) -> np.ndarray:
        return _sigmoid(self._raw_predict(X))

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)


class GBDTRegressor(_GbdtBase, RegressorMixin):
    """Boosted histogram trees on squared loss; initial score is the mean."""

    def fit(self, X, y):
        self._validate()
        X, y = check_X_y(X, y)
        self._boost(X, y, float(y.mean()), loss="squared")
        return self

    def predict(self, X) -> np.ndarray:
        return self._raw_predict(X)
