"""Classifier training and evaluation on spectral profiles.

Three scratch-built classifiers share one sample type and one
evaluation routine: logistic regression (gradient ascent), a soft
margin RBF SVM (sequential minimal optimization), and k-means with a
majority cluster-to-label map.  Labels are 0 = fake, 1 = real
throughout, and every decision tie resolves to label 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kmeans as _kmeans
from . import logistic as _logistic
from . import svm as _svm
from .errors import DataError, DimensionError, ParameterError
from .kmeans import KMeansModel
from .logistic import LogisticModel
from .svm import SvmModel, SvmTrainConfig

__all__ = [
    "LabeledSample",
    "Metrics",
    "LogisticModel",
    "SvmModel",
    "SvmTrainConfig",
    "KMeansModel",
    "stack_samples",
    "lr_train",
    "lr_predict",
    "svm_train",
    "svm_predict",
    "kmeans_fit",
    "kmeans_classifier",
    "evaluate",
]


@dataclass
class LabeledSample:
    """One feature vector with its binary label (0 = fake, 1 = real)."""

    features: np.ndarray
    label: int

    def __post_init__(self) -> None:
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim != 1:
            raise DimensionError("features must be a 1D vector")
        if not np.isfinite(self.features).all():
            raise ParameterError("features must be finite")
        if self.label not in (0, 1):
            raise ParameterError(f"label must be 0 or 1, got {self.label!r}")


def stack_samples(samples) -> tuple[np.ndarray, np.ndarray]:
    """Labeled samples (or (features, label) pairs) to (X, y) arrays."""
    feats = []
    labels = []
    for s in samples:
        if hasattr(s, "features"):
            f, lab = s.features, s.label
        else:
            f, lab = s
        feats.append(np.asarray(f, dtype=np.float64))
        labels.append(int(lab))
    if not feats:
        raise DataError("no samples given")
    dims = {f.shape for f in feats}
    if len(dims) != 1 or feats[0].ndim != 1:
        raise DimensionError(f"inconsistent feature dimensions: {sorted(dims)}")
    return np.stack(feats), np.asarray(labels, dtype=np.int64)


def _features_only(samples) -> np.ndarray:
    if isinstance(samples, np.ndarray) and samples.ndim == 2:
        return samples.astype(np.float64)
    rows = []
    for s in samples:
        rows.append(np.asarray(s.features if hasattr(s, "features") else s,
                               dtype=np.float64))
    if not rows:
        raise DataError("no samples given")
    return np.stack(rows)


def lr_train(samples, learning_rate: float = 0.1, max_iters: int = 10000,
             tol: float = 1e-6) -> LogisticModel:
    """Logistic regression by full-batch gradient ascent."""
    X, y = stack_samples(samples)
    return _logistic.fit(X, y, learning_rate=learning_rate,
                         max_iters=max_iters, tol=tol)


def lr_predict(model: LogisticModel, x: np.ndarray) -> tuple[int, float]:
    """Label and probability of class 1 for a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionError("x must be a single 1D feature vector")
    p = float(_logistic.sigmoid(model.decision(x)))
    return (1 if p >= 0.5 else 0), p


def svm_train(samples, cfg: SvmTrainConfig | None = None,
              info: dict | None = None) -> SvmModel:
    """RBF-kernel SVM trained by SMO."""
    X, y = stack_samples(samples)
    return _svm.fit(X, y, cfg, info=info)


def svm_predict(model: SvmModel, x: np.ndarray) -> int:
    """Label for a single feature vector (decision >= 0 means real)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionError("x must be a single 1D feature vector")
    return int(model.predict(x)[0])


def kmeans_fit(samples, K: int, seed: int = 0, max_iters: int = 100,
               restarts: int = 10, history: list | None = None) -> np.ndarray:
    """Cluster unlabeled samples; returns the (K, d) centroid array."""
    X = _features_only(samples)
    return _kmeans.fit(X, K, seed=seed, max_iters=max_iters,
                       restarts=restarts, history=history)


def kmeans_classifier(centroids: np.ndarray, samples) -> KMeansModel:
    """Attach labels to clusters by majority vote of labeled samples."""
    X, y = stack_samples(samples)
    return _kmeans.assign_labels(centroids, X, y)


@dataclass
class Metrics:
    """Accuracy plus the 2x2 confusion matrix and per-class rates.

    confusion[t, p] counts test samples of true label t predicted p;
    precision and recall are indexed by class label.
    """

    accuracy: float
    confusion: np.ndarray
    precision: np.ndarray = field(repr=False)
    recall: np.ndarray = field(repr=False)


def evaluate(model, test) -> Metrics:
    """Run any trained model over labeled test samples."""
    X, y = stack_samples(test)
    preds = np.asarray(model.predict(X))
    confusion = np.zeros((2, 2), dtype=np.int64)
    np.add.at(confusion, (y, preds), 1)
    accuracy = float(np.trace(confusion) / len(y))
    col = confusion.sum(axis=0)
    row = confusion.sum(axis=1)
    with np.errstate(invalid="ignore"):
        precision = np.where(col > 0, np.diag(confusion) / np.maximum(col, 1), 0.0)
        recall = np.where(row > 0, np.diag(confusion) / np.maximum(row, 1), 0.0)
    return Metrics(accuracy=accuracy, confusion=confusion,
                   precision=precision, recall=recall)
