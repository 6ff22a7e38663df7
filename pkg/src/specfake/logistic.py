"""Binary logistic regression trained by full-batch gradient ascent.

The model is p(y=1|x) = sigmoid(w.x + b).  Training maximizes the mean
log-likelihood minus an L2 ridge term over the augmented parameter
vector (bias included):

    f(w) = mean_i [ y_i z_i - log(1 + exp(z_i)) ] - (l2/2) * ||w||^2

The small ridge makes f strictly concave, so the optimum is unique even
on linearly separable data where plain maximum likelihood diverges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, TrainingError

__all__ = [
    "L2_PENALTY",
    "sigmoid",
    "penalized_loglik",
    "loglik_gradient",
    "LogisticModel",
    "fit",
]

L2_PENALTY = 1e-4


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function, elementwise."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _augment(X: np.ndarray) -> np.ndarray:
    return np.hstack([X, np.ones((X.shape[0], 1))])


def penalized_loglik(w_aug: np.ndarray, X: np.ndarray, y: np.ndarray,
                     l2: float = L2_PENALTY) -> float:
    """Mean log-likelihood minus the ridge term, at augmented weights.

    w_aug has d+1 entries, bias last.
    """
    z = _augment(X) @ w_aug
    ll = np.mean(y * z - np.logaddexp(0.0, z))
    return float(ll - 0.5 * l2 * np.dot(w_aug, w_aug))


def loglik_gradient(w_aug: np.ndarray, X: np.ndarray, y: np.ndarray,
                    l2: float = L2_PENALTY) -> np.ndarray:
    """Gradient of penalized_loglik with respect to w_aug."""
    Xa = _augment(X)
    z = Xa @ w_aug
    return Xa.T @ (y - sigmoid(z)) / X.shape[0] - l2 * w_aug


@dataclass
class LogisticModel:
    """Trained weights and bias; prediction is threshold at p = 0.5."""

    weights: np.ndarray
    bias: float

    def decision(self, X: np.ndarray) -> np.ndarray:
        """Linear score w.x + b for one sample or a stack of samples."""
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.weights.shape[0]:
            raise DimensionError(
                f"model expects {self.weights.shape[0]} features, got {X.shape[-1]}"
            )
        return X @ self.weights + self.bias

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.decision(X))

    def predict(self, X: np.ndarray) -> np.ndarray:
        # p >= 0.5 iff z >= 0; ties go to label 1 (real)
        return (self.decision(X) >= 0.0).astype(np.int64)


def fit(X: np.ndarray, y: np.ndarray, learning_rate: float = 0.1,
        max_iters: int = 10000, tol: float = 1e-6,
        l2: float = L2_PENALTY) -> LogisticModel:
    """Gradient ascent from w = 0.

    Stops when the gradient infinity-norm falls below tol or after
    max_iters steps, whichever comes first.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise DimensionError("X must be (n, d) with matching label vector")
    classes = np.unique(y)
    if not np.array_equal(classes, [0.0, 1.0]):
        raise TrainingError(
            f"training needs samples of both classes, got labels {classes.tolist()}"
        )
    d = X.shape[1]
    w = np.zeros(d + 1)
    Xa = _augment(X)
    n = X.shape[0]
    for _ in range(max_iters):
        z = Xa @ w
        g = Xa.T @ (y - sigmoid(z)) / n - l2 * w
        if np.max(np.abs(g)) < tol:
            break
        w = w + learning_rate * g
    return LogisticModel(weights=w[:d].copy(), bias=float(w[d]))
