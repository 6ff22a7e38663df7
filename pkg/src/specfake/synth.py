"""Synthetic two-class corpus with a controlled high-frequency cue.

Each index i yields a paired real/fake PNG from one seeded noise draw:
white Gaussian noise is shaped in the frequency domain to an isotropic
1/f^p amplitude (the "real" image), and the same shaped spectrum is
additionally low-pass filtered for the "fake" one.  The filter passes
radii up to cutoff * corner_radius untouched and rolls off above with
a Gaussian shoulder, so a cutoff near 1 leaves the classes matching.
Both images are rendered at matched pixel variance, which removes
brightness and contrast as trivial cues and leaves the suppressed high
band as the discriminative signal.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .dataset import DatasetManifest, ManifestEntry, write_manifest
from .errors import DataError, ParameterError
from .fourier import fft2d, ifft2d

__all__ = ["SynthConfig", "generate_synthetic"]

# Gaussian roll-off width of the fake low-pass, as a fraction of the
# corner radius; wide enough that mid frequencies carry signal too
_SHOULDER_FRAC = 0.1

# pixel rendering: mean 128, one field standard deviation = 40 levels
_PIXEL_MEAN = 128.0
_PIXEL_SCALE = 40.0


@dataclass
class SynthConfig:
    """Corpus shape and the two spectral model parameters."""

    image_size: int = 128
    count: int = 500
    seed: int = 42
    exponent: float = 1.8
    cutoff: float = 0.35
    frames_per_group: int = 0

    def __post_init__(self) -> None:
        if self.image_size < 2:
            raise ParameterError(f"image_size must be >= 2, got {self.image_size}")
        if self.count < 1:
            raise ParameterError(f"count must be >= 1, got {self.count}")
        if self.seed < 0:
            raise ParameterError(f"seed must be non-negative, got {self.seed}")
        if not self.exponent > 0:
            raise ParameterError(f"exponent must be positive, got {self.exponent}")
        if not 0.0 < self.cutoff < 1.0:
            raise ParameterError(f"cutoff must lie in (0, 1), got {self.cutoff}")
        if self.frames_per_group < 0:
            raise ParameterError(
                f"frames_per_group must be >= 0, got {self.frames_per_group}"
            )


def _freq_radius(size: int) -> np.ndarray:
    # radial distance in the unshifted DFT layout (DC at [0, 0])
    f = (np.arange(size) + size // 2) % size - size // 2
    return np.hypot(f[:, None], f[None, :])


def _render(field: np.ndarray) -> np.ndarray:
    sigma = field.std()
    px = _PIXEL_MEAN + _PIXEL_SCALE * field / sigma
    return np.clip(np.rint(px), 0, 255).astype(np.uint8)


def _image_pair(cfg: SynthConfig, index: int) -> tuple[np.ndarray, np.ndarray]:
    """(real, fake) uint8 images for one seeded index."""
    rng = np.random.default_rng([cfg.seed, index])
    size = cfg.image_size
    noise = rng.standard_normal((size, size))
    r = _freq_radius(size)
    amp = np.zeros_like(r)
    amp[r > 0] = r[r > 0] ** (-cfg.exponent / 2.0)
    spectrum = fft2d(noise) * amp

    corner = np.hypot(size // 2, size // 2)
    r_cut = cfg.cutoff * corner
    width = _SHOULDER_FRAC * corner
    lowpass = np.where(
        r <= r_cut, 1.0, np.exp(-((r - r_cut) ** 2) / (2.0 * width * width))
    )

    real_field = ifft2d(spectrum).real
    fake_field = ifft2d(spectrum * lowpass).real
    return _render(real_field), _render(fake_field)


def _group_name(kind: str, index: int, frames_per_group: int) -> str | None:
    if frames_per_group <= 0:
        return None
    return f"{kind}_vid{index // frames_per_group:04d}"


def generate_synthetic(cfg: SynthConfig, out_dir: str) -> DatasetManifest:
    """Write cfg.count real/fake PNG pairs plus manifest.csv to out_dir.

    Images land in out_dir/images with manifest paths relative to
    out_dir, so the tree is relocatable.  Generation is deterministic
    per (seed, index): the same seed always reproduces the same bytes,
    regardless of count.
    """
    img_dir = os.path.join(out_dir, "images")
    try:
        os.makedirs(img_dir, exist_ok=True)
        probe = os.path.join(img_dir, ".write-probe")
        with open(probe, "w") as fh:
            fh.write("")
        os.remove(probe)
    except OSError as exc:
        raise DataError(f"cannot write to {out_dir}: {exc}") from None

    entries: list[ManifestEntry] = []
    for i in range(cfg.count):
        real_px, fake_px = _image_pair(cfg, i)
        for kind, label, px in (("real", 1, real_px), ("fake", 0, fake_px)):
            name = f"{kind}_{i:04d}.png"
            Image.fromarray(px, mode="L").save(os.path.join(img_dir, name),
                                               format="PNG")
            entries.append(
                ManifestEntry(
                    path=f"images/{name}", label=label,
                    group=_group_name(kind, i, cfg.frames_per_group),
                )
            )
    manifest = DatasetManifest(entries=entries, base_dir=os.path.abspath(out_dir))
    write_manifest(manifest, os.path.join(out_dir, "manifest.csv"))
    return manifest
