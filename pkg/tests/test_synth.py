"""Synthetic corpus generator: determinism, labels, spectral cue."""

from __future__ import annotations

import os

import numpy as np
import pytest

from specfake.classify import evaluate, svm_train
from specfake.dataset import (
    SplitSpec,
    load_image,
    split_indices,
    write_cache,
)
from specfake.errors import DataError, ParameterError
from specfake.spectrum import ExtractionConfig, extract_features
from specfake.synth import SynthConfig, generate_synthetic


def _read_tree(root):
    out = {}
    for dirpath, _, names in os.walk(root):
        for name in sorted(names):
            p = os.path.join(dirpath, name)
            out[os.path.relpath(p, root)] = open(p, "rb").read()
    return out


class TestSynthConfig:
    def test_defaults(self):
        cfg = SynthConfig()
        assert cfg.image_size == 128 and cfg.count == 500
        assert cfg.seed == 42 and cfg.cutoff == 0.35
        assert cfg.exponent == 1.8 and cfg.frames_per_group == 0

    def test_validation(self):
        with pytest.raises(ParameterError):
            SynthConfig(image_size=1)
        with pytest.raises(ParameterError):
            SynthConfig(count=0)
        with pytest.raises(ParameterError):
            SynthConfig(seed=-1)
        with pytest.raises(ParameterError):
            SynthConfig(exponent=0.0)
        with pytest.raises(ParameterError):
            SynthConfig(cutoff=0.0)
        with pytest.raises(ParameterError):
            SynthConfig(cutoff=1.0)
        with pytest.raises(ParameterError):
            SynthConfig(frames_per_group=-1)


class TestGeneration:
    def test_layout_and_labels(self, small_manifest):
        # 12 seeded indices produce 12 real/fake pairs
        assert len(small_manifest.entries) == 24
        reals = [e for e in small_manifest.entries if e.label == 1]
        fakes = [e for e in small_manifest.entries if e.label == 0]
        assert len(reals) == len(fakes) == 12
        assert all(e.path.startswith("images/real_") for e in reals)
        assert all(e.path.startswith("images/fake_") for e in fakes)
        assert os.path.exists(os.path.join(small_manifest.base_dir, "manifest.csv"))

    def test_images_decode_at_requested_size(self, small_manifest):
        img = load_image(small_manifest.resolve(small_manifest.entries[0]))
        assert img.shape == (32, 32) and img.dtype == np.uint8

    def test_same_seed_same_bytes(self, tmp_path):
        cfg = SynthConfig(image_size=32, count=3, seed=9)
        generate_synthetic(cfg, str(tmp_path / "a"))
        generate_synthetic(cfg, str(tmp_path / "b"))
        assert _read_tree(tmp_path / "a") == _read_tree(tmp_path / "b")

    def test_index_bytes_independent_of_count(self, tmp_path):
        generate_synthetic(SynthConfig(image_size=32, count=2, seed=9),
                           str(tmp_path / "short"))
        generate_synthetic(SynthConfig(image_size=32, count=5, seed=9),
                           str(tmp_path / "long"))
        for name in ("images/real_0001.png", "images/fake_0001.png"):
            a = (tmp_path / "short" / name).read_bytes()
            b = (tmp_path / "long" / name).read_bytes()
            assert a == b

    def test_different_seeds_differ(self, tmp_path):
        generate_synthetic(SynthConfig(image_size=32, count=2, seed=1),
                           str(tmp_path / "a"))
        generate_synthetic(SynthConfig(image_size=32, count=2, seed=2),
                           str(tmp_path / "b"))
        a = (tmp_path / "a" / "images" / "real_0000.png").read_bytes()
        b = (tmp_path / "b" / "images" / "real_0000.png").read_bytes()
        assert a != b

    def test_unwritable_out_dir(self, tmp_path):
        blocker = tmp_path / "occupied"
        blocker.write_text("a file, not a directory")
        with pytest.raises(DataError, match="cannot write"):
            generate_synthetic(SynthConfig(image_size=32, count=1), str(blocker))

    def test_group_naming(self, grouped_manifest):
        # 12 indices at 3 frames per group: vid0000..vid0003 per class
        groups = {e.group for e in grouped_manifest.entries}
        assert groups == {
            f"{kind}_vid{i:04d}" for kind in ("real", "fake") for i in range(4)
        }
        for g in groups:
            labels = {e.label for e in grouped_manifest.entries if e.group == g}
            assert len(labels) == 1

    def test_no_groups_by_default(self, small_manifest):
        assert all(e.group is None for e in small_manifest.entries)


class TestSpectralCue:
    def test_pixel_moments_match_between_classes(self, small_manifest):
        stats = {0: [], 1: []}
        for e in small_manifest.entries:
            img = load_image(small_manifest.resolve(e))
            stats[e.label].append((img.mean(), img.std()))
        for label in (0, 1):
            means, stds = zip(*stats[label])
            assert abs(np.mean(means) - 128.0) < 1.0
            assert abs(np.mean(stds) - 40.0) < 1.0
        assert abs(np.mean([s for _, s in stats[0]])
                   - np.mean([s for _, s in stats[1]])) < 0.5

    def test_fake_profile_lower_in_top_band(self, small_manifest):
        # per-pair margin: the low-pass must show up above 80% of the
        # native radius for every seeded index, not just on average
        cfg = ExtractionConfig(target_len=0)
        pairs: dict[str, dict[int, np.ndarray]] = {}
        for e in small_manifest.entries:
            idx = e.path.rsplit("_", 1)[1]
            prof = extract_features(load_image(small_manifest.resolve(e)), cfg)
            pairs.setdefault(idx, {})[e.label] = prof
        for idx, by_label in pairs.items():
            n = by_label[1].shape[0]
            top = slice(int(0.8 * n), n)
            assert by_label[1][top].mean() > by_label[0][top].mean() + 0.05

    def test_accuracy_tracks_cutoff(self, tmp_path):
        # weaker suppression leaves less signal: accuracy must not rise
        # with cutoff, and a near-unity cutoff lands close to chance
        accs = []
        for j, cutoff in enumerate((0.2, 0.5, 0.8, 0.99)):
            root = tmp_path / f"c{j}"
            man = generate_synthetic(
                SynthConfig(image_size=32, count=30, seed=3, cutoff=cutoff),
                str(root),
            )
            cache = write_cache(man, ExtractionConfig(target_len=20),
                                str(root / "cache.csv"), seed=3)
            tr, te = split_indices(cache.labels, cache.groups, SplitSpec(seed=3))
            model = svm_train(list(zip(cache.features[tr],
                                       cache.labels[tr].tolist())))
            m = evaluate(model, list(zip(cache.features[te],
                                         cache.labels[te].tolist())))
            accs.append(m.accuracy)
        assert accs[0] == accs[1] == 1.0
        assert all(a >= b for a, b in zip(accs, accs[1:]))
        assert accs[-1] <= 0.75
