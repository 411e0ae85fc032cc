"""Independent oracle implementations used to cross-check the library.

Everything here is written the slow, obvious way (pairwise counting,
exhaustive candidate scans, central finite differences) and stays
independent of the code paths it verifies.
"""

from __future__ import annotations

import numpy as np


def pairwise_auroc(y_true, scores) -> float:
    """Mann-Whitney statistic: P(random positive outranks random negative),
    ties counted one half."""
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=float)
    pos = scores[y_true == 1]
    neg = scores[y_true == 0]
    total = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                total += 1.0
            elif p == n:
                total += 0.5
    return total / (len(pos) * len(neg))


def _gini(labels) -> float:
    n = len(labels)
    c1 = int(sum(labels))
    c0 = n - c1
    p0 = c0 / n
    p1 = c1 / n
    return 1.0 - p0 * p0 - p1 * p1


def brute_force_gini_split(X, y) -> tuple[float, int, float] | None:
    """Exhaustive scan over every (feature, midpoint) candidate, minimizing
    weighted Gini; first strictly best candidate wins."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    n, d = X.shape
    best = None
    for f in range(d):
        values = sorted(set(X[:, f].tolist()))
        for a, b in zip(values, values[1:]):
            threshold = (a + b) / 2
            left = X[:, f] < threshold
            nl = int(left.sum())
            nr = n - nl
            if nl == 0 or nr == 0:
                continue
            cost = (nl * _gini(y[left]) + nr * _gini(y[~left])) / n
            if best is None or cost < best[0]:
                best = (cost, f, threshold)
    return best


def brute_force_variance_split(X, y) -> tuple[float, int, float] | None:
    """Exhaustive weighted-variance scan (numerically independent summation)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, d = X.shape
    best = None
    for f in range(d):
        values = sorted(set(X[:, f].tolist()))
        for a, b in zip(values, values[1:]):
            threshold = (a + b) / 2
            left = X[:, f] < threshold
            nl = int(left.sum())
            nr = n - nl
            if nl == 0 or nr == 0:
                continue
            cost = (nl * float(np.var(y[left])) + nr * float(np.var(y[~left]))) / n
            if best is None or cost < best[0]:
                best = (cost, f, threshold)
    return best


def finite_difference_gradient(fn, w: np.ndarray, b: float, step: float = 1e-6):
    """Central finite differences of a scalar loss fn(w, b)."""
    grad_w = np.zeros_like(w)
    for j in range(w.size):
        bump = np.zeros_like(w)
        bump[j] = step
        grad_w[j] = (fn(w + bump, b) - fn(w - bump, b)) / (2 * step)
    grad_b = (fn(w, b + step) - fn(w, b - step)) / (2 * step)
    return grad_w, grad_b
