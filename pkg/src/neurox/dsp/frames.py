"""Shared framing and spectrum helpers for the DSP kernels."""

from __future__ import annotations

import numpy as np


def frame_count(n_samples: int, frame_len: int, hop: int) -> int:
    if n_samples < frame_len:
        return 0
    return (n_samples - frame_len) // hop + 1


def frame_signal(samples: np.ndarray, frame_len: int, hop: int) -> np.ndarray:
    """Slice a signal into full overlapping frames, one per row.

    Trailing samples that do not fill a whole frame are dropped.
    """
    n = frame_count(len(samples), frame_len, hop)
    if n == 0:
        raise ValueError(
            f"signal of {len(samples)} samples is shorter than one {frame_len}-sample frame"
        )
    idx = np.arange(frame_len)[None, :] + hop * np.arange(n)[:, None]
    return samples[idx]


def hann_window(frame_len: int) -> np.ndarray:
    # Symmetric Hann; the frozen convention for all spectral kernels here.
    n = np.arange(frame_len)
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * n / (frame_len - 1))


def next_pow2(n: int) -> int:
    size = 1
    while size < n:
        size *= 2
    return size


def power_spectrum(frames: np.ndarray, n_fft: int) -> np.ndarray:
    """Magnitude-squared rFFT of each (already windowed) frame row."""
    spec = np.fft.rfft(frames, n=n_fft, axis=-1)
    return np.abs(spec) ** 2


def frame_rms(frames: np.ndarray) -> np.ndarray:
    return np.sqrt(np.mean(frames**2, axis=-1))
