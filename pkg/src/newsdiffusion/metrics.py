"""Classification and regression metrics with fixed zero-denominator rules.

The positive class is label 1 (shared / fake-positive) everywhere.
Conventions: precision and recall are 0 when their denominator is 0,
F1 is 0 when precision + recall is 0, and R^2 is 0 when the target has
zero variance. Reports therefore never contain NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

POSITIVE_LABEL = 1


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def to_dict(self) -> dict[str, int]:
        return {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn}


def confusion(y_true, y_pred) -> ConfusionMatrix:
    y_true = np.asarray(y_true).astype(np.int64).ravel()
    y_pred = np.asarray(y_pred).astype(np.int64).ravel()
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred lengths differ")
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    tn = int(np.sum((y_true == 0) & (y_pred == 0)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    return ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)


def classification_metrics(cm: ConfusionMatrix) -> dict[str, float]:
    total = cm.total
    accuracy = (cm.tp + cm.tn) / total if total else 0.0
    precision = cm.tp / (cm.tp + cm.fp) if (cm.tp + cm.fp) else 0.0
    recall = cm.tp / (cm.tp + cm.fn) if (cm.tp + cm.fn) else 0.0
    f1 = 2 * precision * recall / (precision + recall) if (precision + recall) else 0.0
    return {"accuracy": accuracy, "precision": precision, "recall": recall, "f1": f1}


class RocPoint(NamedTuple):
    fpr: float
    tpr: float
    threshold: float


@dataclass(frozen=True)
class RocCurve:
    points: list[RocPoint]
    auroc: float


def roc_auroc(y_true, scores) -> RocCurve:
    """ROC curve over descending distinct score thresholds plus its area.

    Tied scores are grouped, which makes the trapezoidal area equal to
    the Mann-Whitney pair statistic with ties counted one half.
    """
    y_true = np.asarray(y_true).astype(np.int64).ravel()
    scores = np.asarray(scores, dtype=np.float64).ravel()
    if y_true.shape != scores.shape:
        raise ValueError("y_true and scores lengths differ")
    n_pos = int(np.sum(y_true == 1))
    n_neg = int(np.sum(y_true == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUROC is undefined when y_true has a single class")
    order = np.argsort(-scores, kind="stable")
    points = [RocPoint(0.0, 0.0, math.inf)]
    tp = fp = 0
    area = 0.0
    i = 0
    while i < order.size:
        threshold = scores[order[i]]
        while i < order.size and scores[order[i]] == threshold:
            if y_true[order[i]] == 1:
                tp += 1
            else:
                fp += 1
            i += 1
        prev = points[-1]
        point = RocPoint(fp / n_neg, tp / n_pos, float(threshold))
        area += (point.fpr - prev.fpr) * (point.tpr + prev.tpr) / 2.0
        points.append(point)
    return RocCurve(points=points, auroc=area)


def regression_metrics(y_true, y_pred) -> dict[str, float]:
    y_true = np.asarray(y_true, dtype=np.float64).ravel()
    y_pred = np.asarray(y_pred, dtype=np.float64).ravel()
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred lengths differ")
    if y_true.size == 0:
        raise ValueError("empty input")
    residuals = y_true - y_pred
    rmse = float(np.sqrt(np.mean(residuals**2)))
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((y_true - y_true.mean()) ** 2))
    r2 = 0.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return {"rmse": rmse, "r2": r2}


def roc_csv_rows(curve: RocCurve) -> list[tuple[float, float, float]]:
    """(fpr, tpr, threshold) rows for a plot-ready CSV export."""
    return [(p.fpr, p.tpr, p.threshold) for p in curve.points]
