"""Corpus plumbing: manifests, reproducible splits, feature caches.

A manifest is a CSV of image paths with binary labels and an optional
group column tying frames of one video together.  Extracted profiles
persist in a cache CSV whose comment header echoes the extraction
config, so every downstream result file is self-describing.  Splits
are seeded, stratified by default, and never separate rows that share
a group.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DataError, ParameterError, SpecfakeError
from .spectrum import ExtractionConfig, extract_features

__all__ = [
    "ManifestEntry",
    "DatasetManifest",
    "SplitSpec",
    "FeatureCache",
    "load_manifest",
    "write_manifest",
    "split",
    "split_indices",
    "load_image",
    "write_cache",
    "save_cache",
    "load_cache",
    "band_select",
]


def _fmt(x: float) -> str:
    # 17 significant digits: round-trips IEEE doubles exactly
    return format(float(x), ".17g")


@dataclass
class ManifestEntry:
    path: str
    label: int
    group: str | None = None


@dataclass
class DatasetManifest:
    """Ordered manifest rows plus the directory paths are relative to."""

    entries: list[ManifestEntry]
    base_dir: str = "."

    def resolve(self, entry: ManifestEntry) -> str:
        if os.path.isabs(entry.path):
            return entry.path
        return os.path.join(self.base_dir, entry.path)

    def labels(self) -> np.ndarray:
        return np.array([e.label for e in self.entries], dtype=np.int64)

    def groups(self) -> list[str | None]:
        return [e.group for e in self.entries]


@dataclass
class SplitSpec:
    """Seeded train/test split settings."""

    test_fraction: float = 0.2
    seed: int = 42
    stratified: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.test_fraction < 1.0:
            raise ParameterError(
                f"test_fraction must lie in (0, 1), got {self.test_fraction}"
            )
        if self.seed < 0:
            raise ParameterError(f"seed must be non-negative, got {self.seed}")


@dataclass
class FeatureCache:
    """Extracted profiles in manifest order with their config echo."""

    d: int
    log_power: bool
    normalize_dc: bool
    target_len: int
    epsilon: float
    seed: int
    paths: list[str]
    groups: list[str | None]
    labels: np.ndarray
    features: np.ndarray
    band: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.features.shape != (len(self.paths), self.d):
            raise DataError(
                f"features shape {self.features.shape} does not match "
                f"{len(self.paths)} rows of dimension {self.d}"
            )

    def samples(self) -> list[tuple[np.ndarray, int]]:
        return list(zip(self.features, self.labels.tolist()))


def load_manifest(path: str) -> DatasetManifest:
    """Parse and validate a `path,label[,group]` CSV."""
    if not os.path.exists(path):
        raise DataError(f"manifest not found: {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty manifest") from None
        header = [h.strip() for h in header]
        if header not in (["path", "label"], ["path", "label", "group"]):
            raise DataError(
                f"{path}: header must be path,label[,group], got {','.join(header)}"
            )
        entries: list[ManifestEntry] = []
        seen: dict[str, int] = {}
        for row in reader:
            if not row:
                continue
            line = reader.line_num
            if len(row) != len(header):
                raise DataError(
                    f"{path} line {line}: expected {len(header)} fields, got {len(row)}"
                )
            p = row[0]
            if not p:
                raise DataError(f"{path} line {line}: empty path")
            lab = row[1].strip()
            if lab not in ("0", "1"):
                raise DataError(
                    f"{path} line {line}: label must be 0 or 1, got {row[1]!r}"
                )
            if p in seen:
                raise DataError(
                    f"{path} line {line}: duplicate path {p!r} "
                    f"(first seen on line {seen[p]})"
                )
            seen[p] = line
            group = row[2] if len(header) == 3 and row[2] != "" else None
            entries.append(ManifestEntry(path=p, label=int(lab), group=group))
    return DatasetManifest(entries=entries,
                           base_dir=os.path.dirname(os.path.abspath(path)))


def write_manifest(manifest: DatasetManifest, path: str) -> None:
    """Write entries back out; the group column appears only if used."""
    has_groups = any(e.group is not None for e in manifest.entries)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["path", "label", "group"] if has_groups else ["path", "label"])
        for e in manifest.entries:
            row = [e.path, str(e.label)]
            if has_groups:
                row.append(e.group if e.group is not None else "")
            writer.writerow(row)


def _test_count(n_units: int, fraction: float) -> int:
    # round half up, but keep at least one unit on each side
    return min(n_units - 1, max(1, int(np.floor(n_units * fraction + 0.5))))


def split_indices(labels: np.ndarray, groups: list[str | None],
                  spec: SplitSpec) -> tuple[np.ndarray, np.ndarray]:
    """Row indices for the train and test sides, in original order.

    Rows sharing a group move as one unit; a row without a group is its
    own unit.  Stratified splitting operates per label at unit level,
    so a group mixing both labels is rejected when stratified.
    """
    labels = np.asarray(labels)
    n = len(labels)
    if n < 2:
        raise DataError(f"cannot split {n} rows")
    unit_of: list[tuple] = []
    unit_rows: dict[tuple, list[int]] = {}
    for i in range(n):
        key = ("g", groups[i]) if groups[i] is not None else ("r", i)
        unit_of.append(key)
        unit_rows.setdefault(key, []).append(i)
    unit_order = list(unit_rows)

    pools: list[list[tuple]] = []
    if spec.stratified:
        for key, rows in unit_rows.items():
            ls = {int(labels[i]) for i in rows}
            if len(ls) > 1:
                raise DataError(
                    f"group {key[1]!r} mixes labels {sorted(ls)}; "
                    "disable stratification to split it"
                )
        for lab in (0, 1):
            pool = [k for k in unit_order if int(labels[unit_rows[k][0]]) == lab]
            if pool:
                pools.append(pool)
    else:
        pools.append(unit_order)

    rng = np.random.default_rng(spec.seed)
    test_units: set[tuple] = set()
    for pool in pools:
        m = len(pool)
        if m < 2:
            raise DataError(
                "need at least 2 rows (or whole groups) per class to split, "
                f"got {m}"
            )
        perm = rng.permutation(m)
        k = _test_count(m, spec.test_fraction)
        test_units.update(pool[int(i)] for i in perm[:k])

    test_mask = np.array([unit_of[i] in test_units for i in range(n)])
    idx = np.arange(n)
    return idx[~test_mask], idx[test_mask]


def split(manifest: DatasetManifest,
          spec: SplitSpec) -> tuple[DatasetManifest, DatasetManifest]:
    """Partition a manifest into train and test manifests."""
    train_idx, test_idx = split_indices(manifest.labels(), manifest.groups(), spec)
    pick = lambda idx: DatasetManifest(
        entries=[manifest.entries[i] for i in idx], base_dir=manifest.base_dir
    )
    return pick(train_idx), pick(test_idx)


def load_image(path: str) -> np.ndarray:
    """Decode a PNG/JPEG file to a uint8 array, grayscale or RGB."""
    try:
        with Image.open(path) as img:
            if img.mode not in ("L", "RGB"):
                img = img.convert("RGB")
            return np.asarray(img)
    except (OSError, UnidentifiedImageError, ValueError) as exc:
        raise DataError(f"cannot decode {path}: {exc}") from None


def write_cache(manifest: DatasetManifest, cfg: ExtractionConfig, out_path: str,
                seed: int = 42, jobs: int = 1,
                failures: list | None = None) -> FeatureCache:
    """Extract every manifest row and persist the profiles as CSV.

    A row that fails (undecodable file, degenerate image, mismatched
    profile length) is skipped and recorded as (path, reason); when the
    caller does not pass a `failures` list, any failure raises after
    the surviving rows have been written.
    """
    if jobs < 1:
        raise ParameterError(f"jobs must be >= 1, got {jobs}")

    def one(entry: ManifestEntry):
        try:
            return extract_features(load_image(manifest.resolve(entry)), cfg), None
        except SpecfakeError as exc:
            return None, str(exc)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, manifest.entries))
    else:
        results = [one(e) for e in manifest.entries]

    report = failures if failures is not None else []
    d = None
    paths, groups, labels, rows = [], [], [], []
    for entry, (prof, err) in zip(manifest.entries, results):
        if err is not None:
            report.append((entry.path, err))
            continue
        if d is None:
            d = prof.shape[0]
        elif prof.shape[0] != d:
            report.append(
                (entry.path, f"profile length {prof.shape[0]} != cache dimension {d}")
            )
            continue
        paths.append(entry.path)
        groups.append(entry.group)
        labels.append(entry.label)
        rows.append(prof)
    if d is None:
        detail = "; ".join(f"{p}: {m}" for p, m in report[:5])
        raise DataError(f"no manifest row could be extracted ({detail})")
    cache = FeatureCache(
        d=int(d), log_power=cfg.log_power, normalize_dc=cfg.normalize_dc,
        target_len=cfg.target_len, epsilon=cfg.epsilon, seed=seed,
        paths=paths, groups=groups,
        labels=np.asarray(labels, dtype=np.int64), features=np.stack(rows),
    )
    save_cache(cache, out_path)
    if failures is None and report:
        detail = "; ".join(f"{p}: {m}" for p, m in report[:5])
        raise DataError(
            f"{len(report)} of {len(manifest.entries)} rows failed extraction "
            f"({detail}); cache written without them"
        )
    return cache


def save_cache(cache: FeatureCache, path: str) -> None:
    """Write a cache CSV with its `#` config-echo header."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(
            f"# d={cache.d}, log={str(cache.log_power).lower()}, "
            f"norm={str(cache.normalize_dc).lower()}, "
            f"target_len={cache.target_len}, epsilon={_fmt(cache.epsilon)}, "
            f"seed={cache.seed}\n"
        )
        if cache.band is not None:
            fh.write(f"# band={cache.band[0]}:{cache.band[1]}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["path", "group", "label"] + [f"b{i}" for i in range(cache.d)])
        for p, g, lab, feat in zip(cache.paths, cache.groups, cache.labels,
                                   cache.features):
            writer.writerow([p, g if g is not None else "", str(int(lab))]
                            + [_fmt(v) for v in feat])


def _parse_meta(line: str, path: str) -> dict[str, str]:
    pairs = {}
    for item in line[1:].strip().split(", "):
        if "=" not in item:
            raise DataError(f"{path}: malformed cache header item {item!r}")
        k, v = item.split("=", 1)
        pairs[k] = v
    return pairs


def load_cache(path: str) -> FeatureCache:
    """Read a cache CSV back; every float is restored bitwise."""
    if not os.path.exists(path):
        raise DataError(f"cache not found: {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        content = fh.read()
    lines = content.splitlines()
    meta_lines = []
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        meta_lines.append(lines[i])
        i += 1
    if not meta_lines:
        raise DataError(f"{path}: missing `#` config header")
    meta = _parse_meta(meta_lines[0], path)
    expected = {"d", "log", "norm", "target_len", "epsilon", "seed"}
    if set(meta) != expected:
        raise DataError(
            f"{path}: cache header must carry exactly {sorted(expected)}, "
            f"got {sorted(meta)}"
        )
    band = None
    if len(meta_lines) > 1:
        extra = _parse_meta(meta_lines[1], path)
        if set(extra) != {"band"} or len(meta_lines) > 2:
            raise DataError(f"{path}: unexpected extra cache header lines")
        a, _, b = extra["band"].partition(":")
        band = (int(a), int(b))
    try:
        d = int(meta["d"])
        target_len = int(meta["target_len"])
        seed = int(meta["seed"])
        epsilon = float(meta["epsilon"])
        flags = {"true": True, "false": False}
        log_power = flags[meta["log"]]
        normalize_dc = flags[meta["norm"]]
    except (KeyError, ValueError) as exc:
        raise DataError(f"{path}: bad cache header value ({exc})") from None

    reader = csv.reader(lines[i:])
    try:
        header = next(reader)
    except StopIteration:
        raise DataError(f"{path}: missing column header row") from None
    if header != ["path", "group", "label"] + [f"b{k}" for k in range(d)]:
        raise DataError(
            f"{path}: column header does not match declared dimension d={d}"
        )
    paths, groups, labels, rows = [], [], [], []
    seen = set()
    for row in reader:
        if not row:
            continue
        line = i + reader.line_num
        if len(row) != 3 + d:
            raise DataError(f"{path} line {line}: expected {3 + d} fields")
        p = row[0]
        if p in seen:
            raise DataError(f"{path} line {line}: duplicate path {p!r}")
        seen.add(p)
        if row[2] not in ("0", "1"):
            raise DataError(f"{path} line {line}: label must be 0 or 1")
        try:
            feat = np.array([float(v) for v in row[3:]], dtype=np.float64)
        except ValueError as exc:
            raise DataError(f"{path} line {line}: bad feature value ({exc})") from None
        if not np.isfinite(feat).all():
            raise DataError(f"{path} line {line}: non-finite feature value")
        paths.append(p)
        groups.append(row[1] if row[1] != "" else None)
        labels.append(int(row[2]))
        rows.append(feat)
    if not rows:
        raise DataError(f"{path}: cache holds no rows")
    return FeatureCache(
        d=d, log_power=log_power, normalize_dc=normalize_dc,
        target_len=target_len, epsilon=epsilon, seed=seed,
        paths=paths, groups=groups,
        labels=np.asarray(labels, dtype=np.int64),
        features=np.stack(rows), band=band,
    )


def band_select(cache: FeatureCache, from_bin: int, to_bin: int) -> FeatureCache:
    """Restrict a native-resolution cache to bins [from_bin, to_bin).

    The band echo in the result is absolute: selecting from an already
    banded cache composes the offsets.
    """
    if cache.target_len != 0:
        raise DataError(
            "band selection needs native-resolution profiles "
            f"(cache was interpolated to target_len={cache.target_len})"
        )
    if not (0 <= from_bin < to_bin <= cache.d):
        raise ParameterError(
            f"need 0 <= from < to <= {cache.d}, got [{from_bin}, {to_bin})"
        )
    base = cache.band[0] if cache.band is not None else 0
    return FeatureCache(
        d=to_bin - from_bin, log_power=cache.log_power,
        normalize_dc=cache.normalize_dc, target_len=cache.target_len,
        epsilon=cache.epsilon, seed=cache.seed,
        paths=list(cache.paths), groups=list(cache.groups),
        labels=cache.labels.copy(),
        features=cache.features[:, from_bin:to_bin].copy(),
        band=(base + from_bin, base + to_bin),
    )
