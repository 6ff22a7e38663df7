"""Shared fixtures: one small synthetic corpus reused across test modules."""

from __future__ import annotations

import pytest

from specfake.dataset import write_cache
from specfake.spectrum import ExtractionConfig
from specfake.synth import SynthConfig, generate_synthetic


@pytest.fixture(scope="session")
def small_manifest(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus32")
    return generate_synthetic(SynthConfig(image_size=32, count=12, seed=7), str(out))


@pytest.fixture(scope="session")
def small_cache(small_manifest, tmp_path_factory):
    # interpolated to a non-native length so config round-trips are visible
    out = tmp_path_factory.mktemp("cache32") / "cache.csv"
    return write_cache(small_manifest, ExtractionConfig(target_len=20), str(out), seed=7)


@pytest.fixture(scope="session")
def native_cache(small_manifest, tmp_path_factory):
    out = tmp_path_factory.mktemp("cache32n") / "cache.csv"
    return write_cache(small_manifest, ExtractionConfig(target_len=0), str(out), seed=7)


@pytest.fixture(scope="session")
def grouped_manifest(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus_grouped")
    cfg = SynthConfig(image_size=32, count=12, seed=11, frames_per_group=3)
    return generate_synthetic(cfg, str(out))


@pytest.fixture(scope="session")
def grouped_cache(grouped_manifest, tmp_path_factory):
    out = tmp_path_factory.mktemp("cache_grouped") / "cache.csv"
    return write_cache(grouped_manifest, ExtractionConfig(target_len=20), str(out), seed=11)
