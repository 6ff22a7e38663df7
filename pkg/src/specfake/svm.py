"""Soft-margin RBF SVM trained by sequential minimal optimization.

The solver follows the simplified SMO scheme: sweep the training set,
and for every point violating its KKT condition try analytic two-point
updates against partners drawn in seeded random order until one moves.
A sweep that moves nothing is counted; after max_passes quiet sweeps in
a row the solver stops and verifies that every point satisfies its KKT
case within kkt_tolerance.

Labels are {0, 1} at the interface and mapped to {-1, +1} internally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError, TrainingError

__all__ = [
    "SvmTrainConfig",
    "SvmModel",
    "rbf_kernel",
    "dual_objective",
    "kkt_residuals",
    "fit",
]

# reject analytic steps smaller than this: they carry no progress
_MIN_STEP = 1e-10
# treat alpha within this of its box bound as sitting on the bound
_BOUND_SLACK = 1e-12
# safety cap on total sweeps; quiet-sweep counting stops long before
_MAX_TOTAL_PASSES = 100000


@dataclass
class SvmTrainConfig:
    """Dual-problem settings.

    gamma may be a positive float or "auto", meaning 1/d.  seed drives
    the random partner order of the SMO sweeps.
    """

    C: float = 1.0
    gamma: float | str = "auto"
    kkt_tolerance: float = 1e-3
    max_passes: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.C > 0:
            raise ParameterError(f"C must be positive, got {self.C}")
        if self.gamma != "auto" and not (
            isinstance(self.gamma, (int, float)) and self.gamma > 0
        ):
            raise ParameterError(f'gamma must be positive or "auto", got {self.gamma!r}')
        if not self.kkt_tolerance > 0:
            raise ParameterError(
                f"kkt_tolerance must be positive, got {self.kkt_tolerance}"
            )
        if self.max_passes < 1:
            raise ParameterError(f"max_passes must be >= 1, got {self.max_passes}")


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """exp(-gamma * ||a - b||^2) for every row pair of A and B."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    a2 = np.sum(A * A, axis=1)[:, None]
    b2 = np.sum(B * B, axis=1)[None, :]
    d2 = np.maximum(a2 + b2 - 2.0 * (A @ B.T), 0.0)
    return np.exp(-gamma * d2)


def dual_objective(K: np.ndarray, y: np.ndarray, alpha: np.ndarray) -> float:
    """SVM dual value sum(a) - 0.5 * (a*y)' K (a*y) for labels in {-1,+1}."""
    ay = alpha * y
    return float(np.sum(alpha) - 0.5 * ay @ K @ ay)


def kkt_residuals(K: np.ndarray, y: np.ndarray, alpha: np.ndarray, b: float,
                  C: float) -> np.ndarray:
    """Per-point violation of the KKT case implied by each alpha.

    alpha ~ 0 requires y*f >= 1, alpha ~ C requires y*f <= 1, interior
    alpha requires y*f = 1; the residual is how far the requirement is
    missed (0 when satisfied).
    """
    f = (alpha * y) @ K + b
    margin = y * f - 1.0
    below_c = alpha < C - _BOUND_SLACK
    above_0 = alpha > _BOUND_SLACK
    resid = np.zeros_like(alpha)
    resid = np.where(below_c, np.maximum(resid, -margin), resid)
    resid = np.where(above_0, np.maximum(resid, margin), resid)
    return np.maximum(resid, 0.0)


@dataclass
class SvmModel:
    """Support vectors with signed dual coefficients alpha_i * y_i."""

    support_vectors: np.ndarray
    dual_coeffs: np.ndarray
    bias: float
    gamma: float

    def decision(self, X: np.ndarray) -> np.ndarray:
        """Signed distance surrogate sum_i a_i y_i K(x_i, x) + b."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.support_vectors.shape[1]:
            raise DimensionError(
                f"model expects {self.support_vectors.shape[1]} features, "
                f"got {X.shape[1]}"
            )
        k = rbf_kernel(self.support_vectors, X, self.gamma)
        return self.dual_coeffs @ k + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        # decision exactly 0 resolves to label 1 (real)
        return (self.decision(X) >= 0.0).astype(np.int64)


def _resolve_gamma(gamma: float | str, d: int) -> float:
    return 1.0 / d if gamma == "auto" else float(gamma)


def fit(X: np.ndarray, y01: np.ndarray, cfg: SvmTrainConfig | None = None,
        info: dict | None = None) -> SvmModel:
    """Train on features X (n, d) and labels y01 in {0, 1}.

    When `info` is a dict it receives the raw solver state after
    training: alphas, bias, kernel gamma, sweep count, and the final
    KKT residual vector.
    """
    cfg = cfg if cfg is not None else SvmTrainConfig()
    X = np.asarray(X, dtype=np.float64)
    y01 = np.asarray(y01)
    if X.ndim != 2 or y01.shape != (X.shape[0],):
        raise DimensionError("X must be (n, d) with matching label vector")
    if not np.isfinite(X).all():
        raise ParameterError("features must be finite")
    classes = np.unique(y01)
    if not np.array_equal(classes, [0, 1]):
        raise TrainingError(
            f"training needs samples of both classes, got labels {classes.tolist()}"
        )
    n, d = X.shape
    gamma = _resolve_gamma(cfg.gamma, d)
    C = float(cfg.C)
    tol = float(cfg.kkt_tolerance)
    y = np.where(y01 == 1, 1.0, -1.0)
    K = rbf_kernel(X, X, gamma)
    rng = np.random.default_rng(cfg.seed)

    alpha = np.zeros(n)
    b = 0.0
    # cached decision values f(x_i); all alphas start at zero
    F = np.full(n, b)

    def try_step(i: int, j: int) -> bool:
        nonlocal b, F
        Ei = F[i] - y[i]
        Ej = F[j] - y[j]
        ai_old, aj_old = alpha[i], alpha[j]
        if y[i] != y[j]:
            L = max(0.0, aj_old - ai_old)
            H = min(C, C + aj_old - ai_old)
        else:
            L = max(0.0, ai_old + aj_old - C)
            H = min(C, ai_old + aj_old)
        if L >= H:
            return False
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if eta <= 0:
            # duplicate points give eta = 0; the analytic step is undefined
            return False
        aj = aj_old + y[j] * (Ei - Ej) / eta
        aj = min(H, max(L, aj))
        if abs(aj - aj_old) < _MIN_STEP:
            return False
        ai = ai_old + y[i] * y[j] * (aj_old - aj)
        b1 = b - Ei - y[i] * (ai - ai_old) * K[i, i] - y[j] * (aj - aj_old) * K[i, j]
        b2 = b - Ej - y[i] * (ai - ai_old) * K[i, j] - y[j] * (aj - aj_old) * K[j, j]
        if _BOUND_SLACK < ai < C - _BOUND_SLACK:
            b_new = b1
        elif _BOUND_SLACK < aj < C - _BOUND_SLACK:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        alpha[i], alpha[j] = ai, aj
        F += y[i] * (ai - ai_old) * K[i] + y[j] * (aj - aj_old) * K[j] + (b_new - b)
        b = b_new
        return True

    def examine(i: int) -> bool:
        r = y[i] * F[i] - 1.0
        violates = (r < -tol and alpha[i] < C - _BOUND_SLACK) or (
            r > tol and alpha[i] > _BOUND_SLACK
        )
        if not violates:
            return False
        for j in rng.permutation(n):
            if j != i and try_step(i, int(j)):
                return True
        return False

    quiet = 0
    total = 0
    while quiet < cfg.max_passes:
        if total >= _MAX_TOTAL_PASSES:
            raise TrainingError(f"SMO did not settle within {_MAX_TOTAL_PASSES} sweeps")
        changed = sum(examine(i) for i in range(n))
        total += 1
        quiet = quiet + 1 if changed == 0 else 0

    resid = kkt_residuals(K, y, alpha, b, C)
    worst = float(np.max(resid))
    if worst > tol:
        raise TrainingError(
            f"KKT residual {worst:.3e} exceeds tolerance {tol:.3e} after "
            f"{total} sweeps"
        )
    if info is not None:
        info.update(alpha=alpha.copy(), bias=b, gamma=gamma, passes=total,
                    residuals=resid, gram=K, y_signed=y.copy())

    sv = alpha > _BOUND_SLACK
    return SvmModel(
        support_vectors=X[sv].copy(),
        dual_coeffs=(alpha[sv] * y[sv]),
        bias=float(b),
        gamma=gamma,
    )
