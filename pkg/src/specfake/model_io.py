"""Line-oriented text serialization for trained models.

Every file starts with `<kind> <version>` where kind is lr, svm, or
kmeans and the only version is 1.  Reals are written with 17
significant digits, which round-trips IEEE doubles exactly.

    lr 1                    svm 1                  kmeans 1
    w d v0 ... v{d-1}       gamma value            k K d
    b value                 b value                <d centroid values> (K lines)
                            alpha_y v0 ... (per SV) map cluster label (K lines)
"""

from __future__ import annotations

import os

import numpy as np

from .errors import DataError, ModelIntegrityError, ParameterError
from .kmeans import KMeansModel
from .logistic import LogisticModel
from .svm import SvmModel

__all__ = ["save_model", "load_model"]

_VERSION = 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_vec(v: np.ndarray) -> str:
    return " ".join(_fmt(x) for x in v)


def save_model(model, path: str) -> None:
    """Write a trained model; the kind is inferred from its type."""
    lines = []
    if isinstance(model, LogisticModel):
        d = model.weights.shape[0]
        lines.append(f"lr {_VERSION}")
        lines.append(f"w {d} {_fmt_vec(model.weights)}")
        lines.append(f"b {_fmt(model.bias)}")
    elif isinstance(model, SvmModel):
        lines.append(f"svm {_VERSION}")
        lines.append(f"gamma {_fmt(model.gamma)}")
        lines.append(f"b {_fmt(model.bias)}")
        for coeff, sv in zip(model.dual_coeffs, model.support_vectors):
            lines.append(f"{_fmt(coeff)} {_fmt_vec(sv)}")
    elif isinstance(model, KMeansModel):
        K, d = model.centroids.shape
        lines.append(f"kmeans {_VERSION}")
        lines.append(f"k {K} {d}")
        for c in model.centroids:
            lines.append(_fmt_vec(c))
        for cluster, label in enumerate(model.labels):
            lines.append(f"map {cluster} {int(label)}")
    else:
        raise ParameterError(f"cannot serialize model of type {type(model).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _floats(tokens: list[str], where: str) -> np.ndarray:
    try:
        vals = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as exc:
        raise ModelIntegrityError(f"bad number in {where}: {exc}") from None
    if not np.isfinite(vals).all():
        raise ModelIntegrityError(f"non-finite value in {where}")
    return vals


def _load_lr(lines: list[list[str]]) -> LogisticModel:
    if len(lines) != 2 or lines[0][:1] != ["w"] or lines[1][:1] != ["b"]:
        raise ModelIntegrityError("lr model must be a w line then a b line")
    try:
        d = int(lines[0][1])
    except (IndexError, ValueError):
        raise ModelIntegrityError("w line must start with the dimension") from None
    w = _floats(lines[0][2:], "weights")
    if w.shape[0] != d:
        raise ModelIntegrityError(f"w line declares {d} weights, found {w.shape[0]}")
    b = _floats(lines[1][1:], "bias")
    if b.shape[0] != 1:
        raise ModelIntegrityError("b line must hold exactly one value")
    return LogisticModel(weights=w, bias=float(b[0]))


def _load_svm(lines: list[list[str]]) -> SvmModel:
    if len(lines) < 3 or lines[0][:1] != ["gamma"] or lines[1][:1] != ["b"]:
        raise ModelIntegrityError(
            "svm model must be gamma, b, then at least one support vector"
        )
    gamma = _floats(lines[0][1:], "gamma")
    bias = _floats(lines[1][1:], "bias")
    if gamma.shape[0] != 1 or bias.shape[0] != 1:
        raise ModelIntegrityError("gamma and b lines hold exactly one value each")
    if not gamma[0] > 0:
        raise ModelIntegrityError(f"gamma must be positive, got {gamma[0]}")
    rows = [_floats(t, "support vector") for t in lines[2:]]
    widths = {r.shape[0] for r in rows}
    if len(widths) != 1 or min(widths) < 2:
        raise ModelIntegrityError("support vector lines have inconsistent width")
    table = np.stack(rows)
    coeffs = table[:, 0]
    if np.any(coeffs == 0.0):
        raise ModelIntegrityError("support vector with zero dual coefficient")
    # contiguous so kernel evaluations take the same BLAS path as the
    # freshly trained model
    return SvmModel(support_vectors=np.ascontiguousarray(table[:, 1:]),
                    dual_coeffs=coeffs.copy(),
                    bias=float(bias[0]), gamma=float(gamma[0]))


def _load_kmeans(lines: list[list[str]]) -> KMeansModel:
    if not lines or lines[0][:1] != ["k"] or len(lines[0]) != 3:
        raise ModelIntegrityError("kmeans model must start with a `k K d` line")
    try:
        K, d = int(lines[0][1]), int(lines[0][2])
    except ValueError:
        raise ModelIntegrityError("k line must hold two integers") from None
    if len(lines) != 1 + 2 * K:
        raise ModelIntegrityError(
            f"expected {K} centroid and {K} map lines, found {len(lines) - 1}"
        )
    cents = []
    for row in lines[1 : 1 + K]:
        v = _floats(row, "centroid")
        if v.shape[0] != d:
            raise ModelIntegrityError(f"centroid has {v.shape[0]} values, expected {d}")
        cents.append(v)
    labels = np.full(K, -1, dtype=np.int64)
    for row in lines[1 + K :]:
        if row[:1] != ["map"] or len(row) != 3:
            raise ModelIntegrityError("map lines must read `map cluster label`")
        try:
            cluster, label = int(row[1]), int(row[2])
        except ValueError:
            raise ModelIntegrityError("map line must hold two integers") from None
        if not 0 <= cluster < K or labels[cluster] != -1:
            raise ModelIntegrityError(f"bad or repeated cluster index {cluster}")
        if label not in (0, 1):
            raise ModelIntegrityError(f"cluster label must be 0 or 1, got {label}")
        labels[cluster] = label
    try:
        return KMeansModel(centroids=np.stack(cents), labels=labels)
    except ParameterError as exc:
        raise ModelIntegrityError(str(exc)) from None


def load_model(path: str):
    """Read any model file back into its typed form."""
    if not os.path.exists(path):
        raise DataError(f"model file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.split() for ln in fh.read().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise ModelIntegrityError("missing `kind version` header line")
    kind, version = lines[0]
    if version != str(_VERSION):
        raise ModelIntegrityError(f"unsupported model version {version!r}")
    loaders = {"lr": _load_lr, "svm": _load_svm, "kmeans": _load_kmeans}
    if kind not in loaders:
        raise ModelIntegrityError(f"unknown model kind {kind!r}")
    return loaders[kind](lines[1:])
