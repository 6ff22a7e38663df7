"""Discrete Fourier transforms built on explicit radix-2 and chirp-z steps.

The forward transform follows the plain unnormalized convention

    X[k] = sum_n x[n] * exp(-2j*pi*k*n/N),

and the 2D transform applies it along rows then columns, so

    X[k, l] = sum_{m, n} x[m, n] * exp(-2j*pi*(k*m/M + l*n/N)).

The inverse carries the full 1/N (or 1/(M*N)) factor.  Power-of-two
lengths run through an iterative decimation-in-time butterfly; every
other length is reduced to a power-of-two circular convolution with a
quadratic chirp (Bluestein's identity n*k = (n**2 + k**2 - (k-n)**2)/2).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError

__all__ = ["fft", "ifft", "fft2d", "ifft2d"]


def _bit_reverse_indices(n: int) -> np.ndarray:
    levels = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for _ in range(levels):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def _fft_pow2(x: np.ndarray) -> np.ndarray:
    # x: complex, last-axis length a power of two
    n = x.shape[-1]
    y = x[..., _bit_reverse_indices(n)]
    size = 2
    while size <= n:
        half = size // 2
        w = np.exp(-2j * np.pi * np.arange(half) / size)
        v = y.reshape(y.shape[:-1] + (n // size, size))
        a = v[..., :half]
        t = v[..., half:] * w
        y = np.concatenate((a + t, a - t), axis=-1).reshape(x.shape)
        size *= 2
    return y


def _chirp(n: int) -> np.ndarray:
    # exp(-1j*pi*j**2/n) with the squared index reduced mod 2n first so
    # the phase argument stays small even for large transform lengths
    j = np.arange(n, dtype=np.int64)
    q = (j * j) % (2 * n)
    return np.exp(-1j * np.pi * q / n)


def _fft_bluestein(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    c = _chirp(n)
    m = 1 << (2 * n - 1).bit_length()
    a = np.zeros(x.shape[:-1] + (m,), dtype=np.complex128)
    a[..., :n] = x * c
    b = np.zeros(m, dtype=np.complex128)
    b[:n] = np.conj(c)
    b[m - n + 1:] = np.conj(c[1:][::-1])
    conv = _ifft_any(_fft_pow2(a) * _fft_pow2(b))
    return conv[..., :n] * c


def _fft_any(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    if n == 1:
        return x.copy()
    if n & (n - 1) == 0:
        return _fft_pow2(x)
    return _fft_bluestein(x)


def _ifft_any(x: np.ndarray) -> np.ndarray:
    return np.conj(_fft_any(np.conj(x))) / x.shape[-1]


def _as_complex(x: np.ndarray) -> np.ndarray:
    a = np.asarray(x)
    if a.ndim == 0 or a.shape[-1] == 0:
        raise DimensionError("transform axis must have length >= 1")
    return a.astype(np.complex128)


def fft(x: np.ndarray) -> np.ndarray:
    """Unnormalized DFT along the last axis, any length >= 1."""
    return _fft_any(_as_complex(x))


def ifft(x: np.ndarray) -> np.ndarray:
    """Inverse DFT along the last axis, including the 1/N factor."""
    return _ifft_any(_as_complex(x))


def fft2d(a: np.ndarray) -> np.ndarray:
    """2D DFT of a matrix: transform rows, then columns."""
    x = _as_complex(a)
    if x.ndim != 2:
        raise DimensionError(f"expected a 2D array, got ndim={x.ndim}")
    if x.shape[0] == 0:
        raise DimensionError("transform axis must have length >= 1")
    rows = _fft_any(x)
    return np.ascontiguousarray(_fft_any(np.ascontiguousarray(rows.T)).T)


def ifft2d(a: np.ndarray) -> np.ndarray:
    """Inverse 2D DFT, including the 1/(M*N) factor."""
    x = _as_complex(a)
    if x.ndim != 2:
        raise DimensionError(f"expected a 2D array, got ndim={x.ndim}")
    return np.conj(fft2d(np.conj(x))) / (x.shape[0] * x.shape[1])
