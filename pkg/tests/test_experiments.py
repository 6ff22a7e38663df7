"""Experiment protocols: sweep, band grid, class stats, majority vote."""

from __future__ import annotations

import numpy as np
import pytest

from specfake import svm as _svm
from specfake.dataset import FeatureCache, SplitSpec, split_indices
from specfake.errors import DataError, ParameterError
from specfake.experiments import (
    BandGridResult,
    ClassStats,
    SweepResult,
    band_grid,
    class_stats,
    default_breakpoints,
    sample_size_sweep,
    video_majority_vote,
    write_bandgrid_csv,
    write_stats_csv,
    write_sweep_csv,
    write_videos_csv,
)
from specfake.svm import SvmTrainConfig


def _cache(features, labels, groups=None, target_len=0):
    features = np.asarray(features, dtype=np.float64)
    n = features.shape[0]
    return FeatureCache(
        d=features.shape[1], log_power=True, normalize_dc=True,
        target_len=target_len, epsilon=1e-12, seed=0,
        paths=[f"p{i}.png" for i in range(n)],
        groups=groups if groups is not None else [None] * n,
        labels=np.asarray(labels, dtype=np.int64), features=features,
    )


class TestDefaultBreakpoints:
    def test_reference_dimension_is_identity(self):
        assert default_breakpoints(722) == [0, 100, 200, 300, 400, 500, 600, 722]

    def test_scaled_to_92_bins(self):
        # floor(b * 92/722 + 0.5) for each reference breakpoint
        assert default_breakpoints(92) == [0, 13, 25, 38, 51, 64, 76, 92]

    def test_tiny_dimension_collapses_duplicates(self):
        assert default_breakpoints(5) == [0, 1, 2, 3, 4, 5]
        assert default_breakpoints(2) == [0, 1, 2]

    def test_endpoints_always_present(self):
        for d in (2, 3, 24, 92, 300, 722, 1000):
            bp = default_breakpoints(d)
            assert bp[0] == 0 and bp[-1] == d
            assert all(b2 > b1 for b1, b2 in zip(bp, bp[1:]))

    def test_too_small(self):
        with pytest.raises(ParameterError):
            default_breakpoints(1)


class TestSampleSizeSweep:
    def test_row_layout_and_bounds(self, small_cache):
        res = sample_size_sweep(small_cache, [4, 8], ["lr", "svm", "kmeans"],
                                SplitSpec(seed=1), repeats=2)
        assert [(r.size, r.classifier) for r in res.rows] == [
            (4, "lr"), (4, "svm"), (4, "kmeans"),
            (8, "lr"), (8, "svm"), (8, "kmeans"),
        ]
        for r in res.rows:
            assert 0.0 <= r.min_accuracy <= r.accuracy <= r.max_accuracy <= 1.0

    def test_deterministic(self, small_cache):
        kw = dict(sizes=[6], classifiers=["svm", "kmeans"],
                  split=SplitSpec(seed=9), repeats=3)
        a = sample_size_sweep(small_cache, **kw)
        b = sample_size_sweep(small_cache, **kw)
        assert [vars(r) for r in a.rows] == [vars(r) for r in b.rows]

    def test_easy_corpus_separates(self, small_cache):
        res = sample_size_sweep(small_cache, [16], ["svm"],
                                SplitSpec(seed=2), repeats=3)
        assert res.rows[0].accuracy >= 0.75

    def test_odd_size_rejected(self, small_cache):
        with pytest.raises(ParameterError, match="odd"):
            sample_size_sweep(small_cache, [5], ["lr"], SplitSpec())

    def test_oversized_request_rejected(self, small_cache):
        with pytest.raises(DataError, match="cache has"):
            sample_size_sweep(small_cache, [26], ["lr"], SplitSpec())

    def test_unknown_classifier_rejected(self, small_cache):
        with pytest.raises(ParameterError, match="unknown classifier"):
            sample_size_sweep(small_cache, [4], ["forest"], SplitSpec())

    def test_bad_repeats_rejected(self, small_cache):
        with pytest.raises(ParameterError):
            sample_size_sweep(small_cache, [4], ["lr"], SplitSpec(), repeats=0)


class TestBandGrid:
    def test_all_pairs_present(self, native_cache):
        bp = default_breakpoints(native_cache.d)
        res = band_grid(native_cache, bp, "lr", SplitSpec(seed=4))
        assert len(res.accuracies) == len(bp) * (len(bp) - 1) // 2
        assert set(res.accuracies) == {
            (bp[i], bp[j]) for i in range(len(bp)) for j in range(i + 1, len(bp))
        }

    def test_full_range_cell_matches_direct_run(self, native_cache):
        spec = SplitSpec(seed=6)
        res = band_grid(native_cache, [0, 12, native_cache.d], "svm", spec)
        tr, te = split_indices(native_cache.labels, native_cache.groups, spec)
        model = _svm.fit(native_cache.features[tr], native_cache.labels[tr],
                         SvmTrainConfig(seed=spec.seed))
        direct = float(np.mean(model.predict(native_cache.features[te])
                               == native_cache.labels[te]))
        assert res.accuracies[(0, native_cache.d)] == direct

    def test_bad_breakpoints(self, native_cache):
        for bp in ([0, 5, 5], [5, 3], [7], [0, native_cache.d + 1], [-1, 4]):
            with pytest.raises(ParameterError):
                band_grid(native_cache, bp, "lr", SplitSpec())

    def test_interpolated_cache_rejected(self, small_cache):
        with pytest.raises(DataError, match="native-resolution"):
            band_grid(small_cache, [0, 10, 20], "lr", SplitSpec())


class TestClassStats:
    def test_constant_class_has_zero_std(self):
        fake = np.tile([1.0, 2.0, 3.0], (4, 1))
        real = np.arange(12, dtype=float).reshape(4, 3)
        cache = _cache(np.vstack([fake, real]), [0] * 4 + [1] * 4)
        stats = class_stats(cache)
        np.testing.assert_array_equal(stats.means[0], [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(stats.stds[0], 0.0)

    def test_population_std_of_two_rows(self):
        cache = _cache([[0.0], [4.0], [1.0], [1.0]], [0, 0, 1, 1])
        stats = class_stats(cache)
        assert stats.means[0][0] == 2.0
        assert stats.stds[0][0] == 2.0  # population: |a - b| / 2

    def test_missing_class_rejected(self):
        cache = _cache([[1.0], [2.0]], [1, 1])
        with pytest.raises(DataError, match="no rows of label 0"):
            class_stats(cache)

    def test_cue_visible_in_aggregate(self, native_cache):
        stats = class_stats(native_cache)
        top = slice(int(0.8 * native_cache.d), native_cache.d)
        assert np.all(stats.means[1][top] > stats.means[0][top])


class TestVideoMajorityVote:
    def test_majority_wins(self):
        assert video_majority_vote([("a", 0), ("a", 0), ("a", 1)]) == [("a", 0)]
        assert video_majority_vote([("a", 1), ("a", 1), ("a", 0)]) == [("a", 1)]

    def test_tie_resolves_to_real(self):
        assert video_majority_vote([("a", 0), ("a", 1)]) == [("a", 1)]

    def test_first_appearance_order(self):
        votes = video_majority_vote([("b", 0), ("a", 1), ("b", 0), ("a", 1)])
        assert votes == [("b", 0), ("a", 1)]

    def test_minority_flip_never_changes_outcome(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(3, 12))
            majority = int(rng.integers(2))
            k_minority = int(rng.integers(0, (n - 1) // 2 + 1))
            frames = [majority] * (n - k_minority) + [1 - majority] * k_minority
            rng.shuffle(frames)
            base = video_majority_vote([("g", f) for f in frames])
            assert base == [("g", majority)]
            if k_minority:
                flipped = list(frames)
                flipped[flipped.index(1 - majority)] = majority
                assert video_majority_vote([("g", f) for f in flipped]) == base

    def test_ungrouped_frame_rejected(self):
        with pytest.raises(DataError, match="without a group"):
            video_majority_vote([("a", 1), (None, 0)])
        with pytest.raises(DataError, match="without a group"):
            video_majority_vote([("", 1)])

    def test_empty_rejected(self):
        with pytest.raises(DataError):
            video_majority_vote([])

    def test_vote_beats_noisy_frames(self):
        # 4 videos x 5 frames, one bad frame in two of them: per-frame
        # accuracy 0.9, per-video accuracy recovers to 1.0
        truth = {"v0": 1, "v1": 1, "v2": 0, "v3": 0}
        frames = []
        for vid, lab in truth.items():
            preds = [lab] * 5
            if vid in ("v0", "v2"):
                preds[2] = 1 - lab
            frames.extend((vid, p) for p in preds)
        frame_acc = np.mean([p == truth[v] for v, p in frames])
        votes = dict(video_majority_vote(frames))
        video_acc = np.mean([votes[v] == truth[v] for v in truth])
        assert frame_acc == 0.9 and video_acc == 1.0


class TestCsvWriters:
    def test_sweep_csv(self, tmp_path):
        res = SweepResult(rows=[])
        from specfake.experiments import SweepRow
        res.rows.append(SweepRow(size=4, classifier="lr", accuracy=0.5,
                                 min_accuracy=0.25, max_accuracy=0.75))
        path = tmp_path / "s.csv"
        write_sweep_csv(res, str(path), echo={"cache": "c.csv", "seed": 1})
        lines = path.read_text().splitlines()
        assert lines[0] == "# cache=c.csv, seed=1"
        assert lines[1] == "size,classifier,accuracy,min_accuracy,max_accuracy"
        assert lines[2] == "4,lr,0.5,0.25,0.75"

    def test_bandgrid_csv_upper_triangle_order(self, tmp_path):
        res = BandGridResult(
            breakpoints=[0, 2, 5],
            accuracies={(0, 2): 0.5, (0, 5): 1.0, (2, 5): 0.75},
        )
        path = tmp_path / "b.csv"
        write_bandgrid_csv(res, str(path))
        assert path.read_text().splitlines() == [
            "from,to,accuracy",
            "0,2,0.5",
            "0,5,1",
            "2,5,0.75",
        ]

    def test_stats_csv(self, tmp_path):
        stats = ClassStats(
            means=np.array([[1.0, 2.0], [3.0, 4.0]]),
            stds=np.array([[0.5, 0.5], [0.25, 0.25]]),
        )
        path = tmp_path / "st.csv"
        write_stats_csv(stats, str(path))
        assert path.read_text().splitlines() == [
            "bin,fake_mean,fake_std,real_mean,real_std",
            "0,1,0.5,3,0.25",
            "1,2,0.5,4,0.25",
        ]

    def test_videos_csv(self, tmp_path):
        path = tmp_path / "v.csv"
        write_videos_csv([("vid0", 1), ("vid1", 0)], str(path),
                         echo={"model": "m.txt"})
        assert path.read_text().splitlines() == [
            "# model=m.txt",
            "group,label",
            "vid0,1",
            "vid1,0",
        ]
