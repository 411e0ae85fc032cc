"""Seeded train/test partitioning, plain or stratified."""

from __future__ import annotations

import numpy as np


def split_indices(
    y: np.ndarray,
    test_fraction: float = 0.25,
    stratified: bool = False,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Disjoint, exhaustive (train, test) index arrays over len(y) rows.

    Stratified mode draws per class, preserving the class ratio within
    one instance per class. The same seed always yields the same split.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    y = np.asarray(y)
    n = y.shape[0]
    if n < 2:
        raise ValueError("need at least 2 rows to split")
    rng = np.random.default_rng(seed)
    if stratified:
        test_parts = []
        train_parts = []
        for value in np.unique(y):
            members = np.flatnonzero(y == value)
            rng.shuffle(members)
            n_test = int(round(members.size * test_fraction))
            test_parts.append(members[:n_test])
            train_parts.append(members[n_test:])
        test = np.sort(np.concatenate(test_parts))
        train = np.sort(np.concatenate(train_parts))
    else:
        perm = rng.permutation(n)
        n_test = int(round(n * test_fraction))
        n_test = min(max(n_test, 1), n - 1)
        test = np.sort(perm[:n_test])
        train = np.sort(perm[n_test:])
    if test.size == 0 or train.size == 0:
        raise ValueError("split produced an empty side; adjust test_fraction")
    return train, test


def train_test_split(
    X,
    y,
    test_fraction: float = 0.25,
    stratified: bool = False,
    seed: int = 0,
):
    """Split (X, y) into X_train, X_test, y_train, y_test."""
    X = np.asarray(X)
    y = np.asarray(y)
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y row counts differ")
    train, test = split_indices(y, test_fraction=test_fraction, stratified=stratified, seed=seed)
    return X[train], X[test], y[train], y[test]
