"""Linear classifiers: full-batch logistic regression and a Pegasos SVM.

Both standardize features internally (zero mean, unit variance; constant
columns map to zero) and store the standardization with the model, so
the pipeline can pass raw feature matrices uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .base import as_matrix, check_X_y, require_fitted


def sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    expz = np.exp(z[~pos])
    out[~pos] = expz / (1.0 + expz)
    return out


@dataclass
class _Standardizer:
    mean: np.ndarray
    scale: np.ndarray
    constant: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "_Standardizer":
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        constant = std == 0.0
        scale = np.where(constant, 1.0, std)
        return cls(mean=mean, scale=scale, constant=constant)

    def transform(self, X: np.ndarray) -> np.ndarray:
        Z = (X - self.mean) / self.scale
        Z[:, self.constant] = 0.0
        return Z

    def to_dict(self) -> dict:
        return {
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
            "constant": self.constant.astype(int).tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "_Standardizer":
        return cls(
            mean=np.array(payload["mean"], dtype=np.float64),
            scale=np.array(payload["scale"], dtype=np.float64),
            constant=np.array(payload["constant"], dtype=bool),
        )


def logistic_loss_grad(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, float]:
    """L2-regularized mean negative log-likelihood and its exact gradient.

    loss = mean(softplus(z) - y*z) + (l2/2) * ||w||^2 with z = Xw + b;
    the bias is unregularized.
    """
    z = X @ w + b
    n = y.shape[0]
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * (w @ w))
    residual = sigmoid(z) - y
    grad_w = X.T @ residual / n + l2 * w
    grad_b = float(residual.mean())
    return loss, grad_w, grad_b


class LogisticRegression(BaseEstimator, ClassifierMixin):
    """Full-batch gradient descent on L2-regularized logistic loss.

    The seed is accepted for trainer-contract uniformity; initialization
    is deterministic at zero, so it never changes the result.
    """

    def __init__(self, l2_lambda: float = 0.0, learning_rate: float = 0.1, n_epochs: int = 300, seed: int = 0):
        self.l2_lambda = l2_lambda
        self.learning_rate = learning_rate
        self.n_epochs = n_epochs
        self.seed = seed

    def fit(self, X, y):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.l2_lambda < 0:
            raise ValueError("l2_lambda must be non-negative")
        X = as_matrix(X)
        y = np.asarray(y, dtype=np.float64).ravel()
        if X.shape[0] != y.shape[0] or X.shape[0] < 1:
            raise ValueError("X and y must be non-empty with matching rows")
        if not np.isin(np.unique(y), (0.0, 1.0)).all():
            raise ValueError("binary targets must be 0/1")
        self.standardizer_ = _Standardizer.fit(X)
        Z = self.standardizer_.transform(X)
        w = np.zeros(X.shape[1])
        b = 0.0
        for _ in range(self.n_epochs):
            _, grad_w, grad_b = logistic_loss_grad(w, b, Z, y, self.l2_lambda)
            w -= self.learning_rate * grad_w
            b -= self.learning_rate * grad_b
        self.coef_ = w
        self.intercept_ = b
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X) -> np.ndarray:
        require_fitted(self, "coef_")
        Z = self.standardizer_.transform(as_matrix(X))
        return sigmoid(Z @ self.coef_ + self.intercept_)

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)

    def _fitted_payload(self) -> dict:
        return {
            "coef": self.coef_.tolist(),
            "intercept": self.intercept_,
            "standardizer": self.standardizer_.to_dict(),
            "n_features_in": self.n_features_in_,
        }

    def _restore(self, payload: dict) -> None:
        self.coef_ = np.array(payload["coef"], dtype=np.float64)
        self.intercept_ = float(payload["intercept"])
        self.standardizer_ = _Standardizer.from_dict(payload["standardizer"])
        self.n_features_in_ = payload["n_features_in"]


class LinearSVMClassifier(BaseEstimator, ClassifierMixin):
    """Pegasos-style stochastic subgradient descent on the hinge loss.

    Labels are mapped to +/-1 internally; the decision is the sign of
    the margin and the probability surrogate is a clipped sigmoid of it.
    """

    def __init__(self, reg_lambda: float = 1e-4, n_epochs: int = 30, seed: int = 0):
        self.reg_lambda = reg_lambda
        self.n_epochs = n_epochs
        self.seed = seed

    def fit(self, X, y):
        if self.reg_lambda <= 0:
            raise ValueError("reg_lambda must be positive")
        X, y = check_X_y(X, y, classification=True)
        self.standardizer_ = _Standardizer.fit(X)
        Z = self.standardizer_.transform(X)
        signs = 2.0 * y - 1.0
        rng = np.random.default_rng(self.seed)
        w = np.zeros(X.shape[1])
        b = 0.0
        t = 0
        for _ in range(self.n_epochs):
            for i in rng.permutation(X.shape[0]):
                t += 1
                eta = 1.0 / (self.reg_lambda * t)
                margin = signs[i] * (Z[i] @ w + b)
                w *= 1.0 - eta * self.reg_lambda
                if margin < 1.0:
                    w += eta * signs[i] * Z[i]
                    b += eta * signs[i]
        self.coef_ = w
        self.intercept_ = b
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X) -> np.ndarray:
        require_fitted(self, "coef_")
        Z = self.standardizer_.transform(as_matrix(X))
        return Z @ self.coef_ + self.intercept_

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(np.clip(self.decision_function(X), -35.0, 35.0))

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) >= 0.0).astype(np.int64)

    def _fitted_payload(self) -> dict:
        return {
            "coef": self.coef_.tolist(),
            "intercept": self.intercept_,
            "standardizer": self.standardizer_.to_dict(),
            "n_features_in": self.n_features_in_,
        }

    def _restore(self, payload: dict) -> None:
        self.coef_ = np.array(payload["coef"], dtype=np.float64)
        self.intercept_ = float(payload["intercept"])
        self.standardizer_ = _Standardizer.from_dict(payload["standardizer"])
        self.n_features_in_ = payload["n_features_in"]
