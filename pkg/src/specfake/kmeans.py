"""Lloyd's k-means with k-means++ seeding and restart selection.

fit() runs `restarts` independent Lloyd optimizations from seeded
k-means++ initializations and keeps the centroids with the lowest
final within-cluster sum of squared distances J.  J is measured after
every assignment step and asserted non-increasing as the iteration
runs; an empty cluster is repaired by moving its centroid onto the
point currently farthest from its own centroid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError

__all__ = ["KMeansModel", "fit", "assign_labels"]

# relative slack for the in-loop monotonicity assertion on J
_J_SLACK = 1e-8


def _sq_dists(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    # (n, K) squared Euclidean distances
    x2 = np.sum(X * X, axis=1)[:, None]
    c2 = np.sum(C * C, axis=1)[None, :]
    return np.maximum(x2 + c2 - 2.0 * (X @ C.T), 0.0)


def _kmeanspp_init(X: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centroids = np.empty((K, X.shape[1]))
    centroids[0] = X[rng.integers(n)]
    d2 = _sq_dists(X, centroids[:1]).ravel()
    for k in range(1, K):
        total = d2.sum()
        if total <= 0:
            # remaining mass is zero: all points coincide with chosen
            # centroids; pick uniformly among the rest
            centroids[k] = X[rng.integers(n)]
        else:
            centroids[k] = X[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, _sq_dists(X, centroids[k : k + 1]).ravel())
    return centroids


def _repair_empty(X: np.ndarray, centroids: np.ndarray, assign: np.ndarray,
                  d2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # move each empty cluster onto the point farthest from its assigned
    # centroid, re-assigning after every move
    K = centroids.shape[0]
    for _ in range(K + 1):
        counts = np.bincount(assign, minlength=K)
        empty = np.nonzero(counts == 0)[0]
        if empty.size == 0:
            return assign, d2
        own = d2[np.arange(X.shape[0]), assign]
        centroids[empty[0]] = X[np.argmax(own)]
        d2 = _sq_dists(X, centroids)
        assign = np.argmin(d2, axis=1)
    raise AssertionError("empty-cluster repair failed to converge")


def _lloyd_once(X: np.ndarray, K: int, rng: np.random.Generator,
                max_iters: int) -> tuple[np.ndarray, float, list[float]]:
    centroids = _kmeanspp_init(X, K, rng)
    hist: list[float] = []
    assign = np.full(X.shape[0], -1)
    j_prev = np.inf
    for _ in range(max_iters):
        d2 = _sq_dists(X, centroids)
        new_assign = np.argmin(d2, axis=1)
        new_assign, d2 = _repair_empty(X, centroids, new_assign, d2)
        j = float(d2[np.arange(X.shape[0]), new_assign].sum())
        assert j <= j_prev + _J_SLACK * (1.0 + abs(j_prev)), (
            f"objective increased: {j_prev} -> {j}"
        )
        hist.append(j)
        j_prev = j
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for k in range(K):
            centroids[k] = X[assign == k].mean(axis=0)
    return centroids, j_prev, hist


def fit(X: np.ndarray, K: int, seed: int = 0, max_iters: int = 100,
        restarts: int = 10, history: list | None = None) -> np.ndarray:
    """Best-of-restarts centroids for X (n, d).

    When `history` is a list it receives one list of J values per
    restart, in restart order.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DimensionError("X must be a nonempty (n, d) array")
    if K < 1:
        raise ParameterError(f"K must be >= 1, got {K}")
    if max_iters < 1 or restarts < 1:
        raise ParameterError("max_iters and restarts must be >= 1")
    distinct = np.unique(X, axis=0).shape[0]
    if K > distinct:
        raise ParameterError(
            f"K={K} exceeds the {distinct} distinct points available"
        )
    best: tuple[float, np.ndarray] | None = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        centroids, j, hist = _lloyd_once(X, K, rng, max_iters)
        if history is not None:
            history.append(hist)
        if best is None or j < best[0]:
            best = (j, centroids)
    return best[1]


@dataclass
class KMeansModel:
    """Centroids plus a cluster-to-label map; predicts by nearest centroid."""

    centroids: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        K = self.centroids.shape[0]
        if K < 2:
            raise ParameterError(f"model needs at least 2 centroids, got {K}")
        if not np.isfinite(self.centroids).all():
            raise ParameterError("centroids must be finite")
        if np.unique(self.centroids, axis=0).shape[0] != K:
            raise ParameterError("centroids must be pairwise distinct")
        if self.labels.shape != (K,):
            raise ParameterError("need exactly one label per centroid")

    def assign(self, X: np.ndarray) -> np.ndarray:
        """Index of the nearest centroid for each row of X."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.centroids.shape[1]:
            raise DimensionError(
                f"model expects {self.centroids.shape[1]} features, got {X.shape[1]}"
            )
        return np.argmin(_sq_dists(X, self.centroids), axis=1)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.labels[self.assign(X)]


def assign_labels(centroids: np.ndarray, X: np.ndarray,
                  y: np.ndarray) -> KMeansModel:
    """Map each cluster to the majority label of the samples it attracts.

    A cluster with a tied vote gets label 1 (real); a cluster attracting
    no labeled samples gets the global majority label.
    """
    centroids = np.asarray(centroids, dtype=np.float64)
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = np.asarray(y)
    if X.shape[0] == 0:
        raise DimensionError("need at least one labeled sample")
    if X.shape[1] != centroids.shape[1]:
        raise DimensionError(
            f"centroids have {centroids.shape[1]} features, samples have {X.shape[1]}"
        )
    K = centroids.shape[0]
    assign = np.argmin(_sq_dists(X, centroids), axis=1)
    global_majority = 1 if np.sum(y == 1) >= np.sum(y == 0) else 0
    labels = np.empty(K, dtype=np.int64)
    for k in range(K):
        members = y[assign == k]
        if members.size == 0:
            labels[k] = global_majority
        else:
            ones = int(np.sum(members == 1))
            labels[k] = 1 if ones >= members.size - ones else 0
    return KMeansModel(centroids=centroids.copy(), labels=labels)
