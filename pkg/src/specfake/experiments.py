"""Experiment protocols over a feature cache.

Four reproducible protocols: accuracy versus training-set size, the
upper-triangular frequency-band grid, per-class profile statistics,
and per-group majority voting.  Every protocol derives all of its
randomness from the seed of the supplied split spec, so rerunning with
identical inputs reproduces results exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kmeans as _kmeans
from . import logistic as _logistic
from . import svm as _svm
from .dataset import FeatureCache, SplitSpec, band_select, split_indices
from .errors import DataError, ParameterError
from .svm import SvmTrainConfig

__all__ = [
    "CLASSIFIER_NAMES",
    "SweepRow",
    "SweepResult",
    "BandGridResult",
    "ClassStats",
    "sample_size_sweep",
    "default_breakpoints",
    "band_grid",
    "class_stats",
    "video_majority_vote",
    "write_sweep_csv",
    "write_bandgrid_csv",
    "write_stats_csv",
    "write_videos_csv",
]

CLASSIFIER_NAMES = ("lr", "svm", "kmeans")

# reference native dimension for scaling the default grid breakpoints
_REFERENCE_BINS = 722
_REFERENCE_BREAKS = (0, 100, 200, 300, 400, 500, 600, 722)


@dataclass
class SweepRow:
    size: int
    classifier: str
    accuracy: float
    min_accuracy: float
    max_accuracy: float


@dataclass
class SweepResult:
    rows: list[SweepRow]


@dataclass
class BandGridResult:
    breakpoints: list[int]
    accuracies: dict[tuple[int, int], float]


@dataclass
class ClassStats:
    """means[label] and stds[label] are d-vectors; std is population."""

    means: np.ndarray
    stds: np.ndarray


def _train_and_score(Xtr: np.ndarray, ytr: np.ndarray, Xte: np.ndarray,
                     yte: np.ndarray, classifier: str, seed: int) -> float:
    if classifier == "lr":
        model = _logistic.fit(Xtr, ytr)
    elif classifier == "svm":
        model = _svm.fit(Xtr, ytr, SvmTrainConfig(seed=seed))
    elif classifier == "kmeans":
        centroids = _kmeans.fit(Xtr, K=2, seed=seed)
        model = _kmeans.assign_labels(centroids, Xtr, ytr)
    else:
        raise ParameterError(
            f"unknown classifier {classifier!r}, expected one of {CLASSIFIER_NAMES}"
        )
    preds = model.predict(Xte)
    return float(np.mean(preds == yte))


def sample_size_sweep(cache: FeatureCache, sizes: list[int],
                      classifiers: list[str], split: SplitSpec,
                      repeats: int = 3) -> SweepResult:
    """Accuracy at each training-corpus size, averaged over repeats.

    Each (size, repeat) draws its own balanced subsample (size//2 rows
    per class) and its own split; rows report mean, min, and max
    accuracy over the repeats.
    """
    if repeats < 1:
        raise ParameterError(f"repeats must be >= 1, got {repeats}")
    for name in classifiers:
        if name not in CLASSIFIER_NAMES:
            raise ParameterError(
                f"unknown classifier {name!r}, expected one of {CLASSIFIER_NAMES}"
            )
    labels = cache.labels
    idx_by_label = {lab: np.nonzero(labels == lab)[0] for lab in (0, 1)}
    for size in sizes:
        if size % 2 != 0:
            raise ParameterError(f"size {size} is odd; classes cannot balance")
        half = size // 2
        for lab in (0, 1):
            if half > idx_by_label[lab].size:
                raise DataError(
                    f"size {size} needs {half} rows of label {lab}, cache has "
                    f"{idx_by_label[lab].size}"
                )

    rows: list[SweepRow] = []
    for size in sizes:
        half = size // 2
        scores: dict[str, list[float]] = {name: [] for name in classifiers}
        for r in range(repeats):
            rng = np.random.default_rng([split.seed, size, r])
            chosen = np.sort(np.concatenate([
                rng.permutation(idx_by_label[0])[:half],
                rng.permutation(idx_by_label[1])[:half],
            ]))
            split_seed = int(rng.integers(2**32))
            svm_seed = int(rng.integers(2**32))
            km_seed = int(rng.integers(2**32))
            sub_labels = labels[chosen]
            sub_groups = [cache.groups[i] for i in chosen]
            tr, te = split_indices(
                sub_labels, sub_groups,
                SplitSpec(test_fraction=split.test_fraction, seed=split_seed,
                          stratified=split.stratified),
            )
            Xtr = cache.features[chosen[tr]]
            Xte = cache.features[chosen[te]]
            ytr, yte = sub_labels[tr], sub_labels[te]
            for name in classifiers:
                seed = svm_seed if name == "svm" else km_seed
                scores[name].append(
                    _train_and_score(Xtr, ytr, Xte, yte, name, seed)
                )
        for name in classifiers:
            vals = scores[name]
            rows.append(SweepRow(
                size=size, classifier=name,
                accuracy=float(np.mean(vals)),
                min_accuracy=float(np.min(vals)),
                max_accuracy=float(np.max(vals)),
            ))
    return SweepResult(rows=rows)


def default_breakpoints(d: int) -> list[int]:
    """The reference 8-point grid axis, rescaled to a d-bin profile."""
    if d < 2:
        raise ParameterError(f"need at least 2 bins, got d={d}")
    scaled = [int(np.floor(b * d / _REFERENCE_BINS + 0.5)) for b in _REFERENCE_BREAKS]
    scaled[-1] = d
    out: list[int] = []
    for b in scaled:
        if not out or b > out[-1]:
            out.append(b)
    return out


def band_grid(cache: FeatureCache, breakpoints: list[int], classifier: str,
              split: SplitSpec) -> BandGridResult:
    """Train and score one model per (from, to) breakpoint pair.

    All cells share the same seeded row split, so cell accuracies are
    comparable; the classifier seed equals the split seed in every
    cell, making the full-range cell identical to a direct run.
    """
    bp = list(breakpoints)
    if len(bp) < 2 or any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
        raise ParameterError(f"breakpoints must be strictly increasing, got {bp}")
    if bp[0] < 0 or bp[-1] > cache.d:
        raise ParameterError(
            f"breakpoints must lie within [0, {cache.d}], got {bp}"
        )
    tr, te = split_indices(cache.labels, cache.groups, split)
    accuracies: dict[tuple[int, int], float] = {}
    for i in range(len(bp)):
        for j in range(i + 1, len(bp)):
            sub = band_select(cache, bp[i], bp[j])
            accuracies[(bp[i], bp[j])] = _train_and_score(
                sub.features[tr], sub.labels[tr],
                sub.features[te], sub.labels[te],
                classifier, split.seed,
            )
    return BandGridResult(breakpoints=bp, accuracies=accuracies)


def class_stats(cache: FeatureCache) -> ClassStats:
    """Per-label elementwise mean and population standard deviation."""
    means = np.empty((2, cache.d))
    stds = np.empty((2, cache.d))
    for lab in (0, 1):
        rows = cache.features[cache.labels == lab]
        if rows.shape[0] == 0:
            raise DataError(f"cache has no rows of label {lab}")
        means[lab] = rows.mean(axis=0)
        stds[lab] = rows.std(axis=0)
    return ClassStats(means=means, stds=stds)


def video_majority_vote(
    frame_predictions: list[tuple[str | None, int]]
) -> list[tuple[str, int]]:
    """Collapse per-frame labels to one label per group.

    Groups keep first-appearance order; an exact tie resolves to
    label 1 (real).
    """
    if not frame_predictions:
        raise DataError("no frame predictions given")
    votes: dict[str, list[int]] = {}
    order: list[str] = []
    for group, label in frame_predictions:
        if group is None or group == "":
            raise DataError("frame without a group cannot join a majority vote")
        if group not in votes:
            votes[group] = []
            order.append(group)
        votes[group].append(int(label))
    out = []
    for group in order:
        ones = sum(votes[group])
        zeros = len(votes[group]) - ones
        out.append((group, 1 if ones >= zeros else 0))
    return out


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_echo(fh, echo: dict | None) -> None:
    if echo:
        items = ", ".join(f"{k}={v}" for k, v in echo.items())
        fh.write(f"# {items}\n")


def write_sweep_csv(result: SweepResult, path: str, echo: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_echo(fh, echo)
        fh.write("size,classifier,accuracy,min_accuracy,max_accuracy\n")
        for r in result.rows:
            fh.write(f"{r.size},{r.classifier},{_fmt(r.accuracy)},"
                     f"{_fmt(r.min_accuracy)},{_fmt(r.max_accuracy)}\n")


def write_bandgrid_csv(result: BandGridResult, path: str,
                       echo: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_echo(fh, echo)
        fh.write("from,to,accuracy\n")
        bp = result.breakpoints
        for i in range(len(bp)):
            for j in range(i + 1, len(bp)):
                acc = result.accuracies[(bp[i], bp[j])]
                fh.write(f"{bp[i]},{bp[j]},{_fmt(acc)}\n")


def write_stats_csv(stats: ClassStats, path: str, echo: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_echo(fh, echo)
        fh.write("bin,fake_mean,fake_std,real_mean,real_std\n")
        d = stats.means.shape[1]
        for b in range(d):
            fh.write(f"{b},{_fmt(stats.means[0, b])},{_fmt(stats.stds[0, b])},"
                     f"{_fmt(stats.means[1, b])},{_fmt(stats.stds[1, b])}\n")


def write_videos_csv(votes: list[tuple[str, int]], path: str,
                     echo: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_echo(fh, echo)
        fh.write("group,label\n")
        for group, label in votes:
            fh.write(f"{group},{label}\n")
