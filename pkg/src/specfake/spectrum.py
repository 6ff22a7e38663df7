"""Image to 1D spectral profile: the feature extraction pipeline.

An image becomes a feature vector in five steps: grayscale conversion,
2D DFT, centered power map, azimuthal averaging into integer-radius
annuli, then optional log scaling, resampling to a fixed length, and
normalization by the zero-frequency bin.  The azimuthal bins use the
rounded Euclidean distance from the centered DC component, so a square
1024x1024 image yields 725 native bins (radius 0 through 724).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateImageError, DimensionError, ParameterError
from . import fourier

__all__ = [
    "ExtractionConfig",
    "to_grayscale",
    "dft2d",
    "power_map",
    "azimuthal_average",
    "interpolate_profile",
    "normalize_profile",
    "extract_features",
    "native_profile_length",
]

# BT.601 luma weights for R, G, B
_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass
class ExtractionConfig:
    """Settings for profile extraction.

    target_len=0 keeps the native bin count; any other value resamples
    the profile to that many points by linear interpolation.  epsilon
    guards both the log transform and the normalization divisor.
    """

    log_power: bool = True
    normalize_dc: bool = True
    target_len: int = 300
    epsilon: float = 1e-12

    def __post_init__(self) -> None:
        if self.target_len != 0 and self.target_len < 2:
            raise ParameterError(
                f"target_len must be 0 (native) or >= 2, got {self.target_len}"
            )
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")


def to_grayscale(image: np.ndarray) -> np.ndarray:
    """Collapse an (M, N) or (M, N, 3) array to float64 luminance."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim == 2:
        return img
    if img.ndim == 3 and img.shape[2] == 3:
        return img @ _LUMA
    raise DimensionError(
        f"expected an (M, N) or (M, N, 3) image, got shape {np.asarray(image).shape}"
    )


def dft2d(img: np.ndarray) -> np.ndarray:
    """Unnormalized 2D DFT of a grayscale image, any size >= 2x2.

    X[k, l] = sum_{m, n} img[m, n] * exp(-2j*pi*(k*m/M + l*n/N)).
    """
    a = np.asarray(img)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2D image, got ndim={a.ndim}")
    if a.shape[0] < 2 or a.shape[1] < 2:
        raise DimensionError(f"image must be at least 2x2, got {a.shape}")
    return fourier.fft2d(a)


def power_map(spectrum: np.ndarray) -> np.ndarray:
    """Squared magnitude of a 2D spectrum with DC shifted to the center.

    The DC term lands at index (M//2, N//2), matching the centering
    convention of the radial binning.
    """
    s = np.asarray(spectrum)
    if s.ndim != 2:
        raise DimensionError(f"expected a 2D spectrum, got ndim={s.ndim}")
    m, n = s.shape
    p = (s.real * s.real + s.imag * s.imag).astype(np.float64)
    return np.roll(p, (m // 2, n // 2), axis=(0, 1))


def azimuthal_average(pmap: np.ndarray) -> np.ndarray:
    """Mean of a centered 2D map over annuli of rounded integer radius.

    Radius is measured from (M//2, N//2) and rounded half away from
    zero; bin r averages every pixel whose rounded distance equals r.
    Trailing radii with no pixels are dropped.
    """
    p = np.asarray(pmap, dtype=np.float64)
    if p.ndim != 2:
        raise DimensionError(f"expected a 2D map, got ndim={p.ndim}")
    m, n = p.shape
    yy = np.arange(m)[:, None] - m // 2
    xx = np.arange(n)[None, :] - n // 2
    rr = np.floor(np.hypot(yy, xx) + 0.5).astype(np.intp).ravel()
    sums = np.bincount(rr, weights=p.ravel())
    counts = np.bincount(rr)
    last = np.nonzero(counts)[0][-1]
    return sums[: last + 1] / counts[: last + 1]


def interpolate_profile(profile: np.ndarray, target_length: int) -> np.ndarray:
    """Resample a profile to target_length points by linear interpolation.

    Both grids span the same normalized abscissa [0, 1], so the first
    and last bins are preserved exactly, and a target_length equal to
    the native length returns the profile unchanged.
    """
    prof = np.asarray(profile, dtype=np.float64)
    if prof.ndim != 1 or prof.size < 2:
        raise DimensionError("profile must be 1D with at least 2 bins")
    if target_length < 2:
        raise ParameterError(f"target_length must be >= 2, got {target_length}")
    src = np.linspace(0.0, 1.0, prof.size)
    dst = np.linspace(0.0, 1.0, target_length)
    return np.interp(dst, src, prof)


def normalize_profile(profile: np.ndarray, epsilon: float = 1e-12) -> np.ndarray:
    """Divide a profile by its zero-frequency bin.

    A zeroth bin within epsilon of zero means the image had essentially
    no mean intensity and the scale is meaningless.
    """
    prof = np.asarray(profile, dtype=np.float64)
    if prof.ndim != 1 or prof.size == 0:
        raise DimensionError("profile must be a non-empty 1D array")
    if abs(prof[0]) <= epsilon:
        raise DegenerateImageError(
            "zero-frequency bin is within epsilon of zero; cannot normalize"
        )
    return prof / prof[0]


def extract_features(image: np.ndarray, cfg: ExtractionConfig | None = None) -> np.ndarray:
    """Full pipeline from image array to 1D feature vector.

    Deterministic: identical pixels and config give bitwise-identical
    profiles.
    """
    config = cfg if cfg is not None else ExtractionConfig()
    gray = to_grayscale(image)
    pmap = power_map(dft2d(gray))
    if config.log_power:
        pmap = np.log(config.epsilon + pmap)
    prof = azimuthal_average(pmap)
    if config.target_len != 0:
        prof = interpolate_profile(prof, config.target_len)
    if config.normalize_dc:
        prof = normalize_profile(prof, config.epsilon)
    return prof


def native_profile_length(m: int, n: int) -> int:
    """Number of native annuli for an (m, n) image.

    The largest rounded radius is attained at the (0, 0) corner of the
    centered grid, at distance hypot(m//2, n//2) from the center.
    """
    if m < 1 or n < 1:
        raise DimensionError(f"image dimensions must be positive, got {(m, n)}")
    return 1 + int(np.floor(np.hypot(m // 2, n // 2) + 0.5))
