"""Mel-frequency cepstral coefficients from first principles.

Conventions (frozen; the test oracle re-derives them with naive loops):
25 ms symmetric-Hann frames, 10 ms hop, FFT size = next power of two,
26 triangular mel filters spanning 0-8000 Hz, natural-log energies with a
1e-12 floor, orthonormal DCT-II, coefficients 1..n kept (c0 dropped).
"""

from __future__ import annotations

import numpy as np

from .audio import AudioClip
from .frames import frame_signal, hann_window, next_pow2, power_spectrum

N_FILTERS = 26
FMIN_HZ = 0.0
FMAX_HZ = 8000.0
LOG_FLOOR = 1e-12
FRAME_MS = 25.0
HOP_MS = 10.0


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(
    n_filters: int, n_fft: int, sample_rate: int, fmin: float, fmax: float
) -> np.ndarray:
    """Triangular filters evaluated at the rFFT bin frequencies.

    Filter j rises over [edge_j, edge_j+1] and falls over [edge_j+1, edge_j+2]
    with mel-spaced edges, so adjacent filters sum to 1 between their peaks
    and the band [fmin, fmax] is covered without gaps.
    """
    if fmax > sample_rate / 2:
        raise ValueError("fmax exceeds the Nyquist frequency")
    edges = mel_to_hz(np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_filters + 2))
    bin_freqs = np.arange(n_fft // 2 + 1) * (sample_rate / n_fft)

    bank = np.zeros((n_filters, len(bin_freqs)))
    for j in range(n_filters):
        lo, mid, hi = edges[j], edges[j + 1], edges[j + 2]
        rise = (bin_freqs - lo) / (mid - lo)
        fall = (hi - bin_freqs) / (hi - mid)
        bank[j] = np.maximum(0.0, np.minimum(rise, fall))
    return bank


def dct_ii_matrix(n_in: int, n_out: int) -> np.ndarray:
    """Orthonormal DCT-II analysis matrix (n_out x n_in)."""
    k = np.arange(n_out)[:, None]
    m = np.arange(n_in)[None, :]
    mat = np.cos(np.pi * k * (2 * m + 1) / (2.0 * n_in))
    mat *= np.sqrt(2.0 / n_in)
    mat[0] *= np.sqrt(0.5)
    return mat


def compute_mfcc(
    clip: AudioClip,
    n_coeff: int = 13,
    frame_ms: float = FRAME_MS,
    hop_ms: float = HOP_MS,
    n_filters: int = N_FILTERS,
    fmin: float = FMIN_HZ,
    fmax: float = FMAX_HZ,
) -> np.ndarray:
    """Per-frame MFCC matrix of shape (n_frames, n_coeff).

    DCT coefficients 1..n_coeff are returned; the energy-like c0 is dropped.
    Raises ValueError when the clip is shorter than one frame.
    """
    if n_coeff < 1 or n_coeff >= n_filters:
        raise ValueError(f"n_coeff must be in [1, {n_filters - 1}], got {n_coeff}")
    sr = clip.sample_rate
    flen = int(round(frame_ms * sr / 1000.0))
    hop = int(round(hop_ms * sr / 1000.0))
    frames = frame_signal(clip.samples, flen, hop) * hann_window(flen)

    n_fft = next_pow2(flen)
    pspec = power_spectrum(frames, n_fft)
    bank = mel_filterbank(n_filters, n_fft, sr, fmin, fmax)
    log_energies = np.log(pspec @ bank.T + LOG_FLOOR)
    dct = dct_ii_matrix(n_filters, n_coeff + 1)
    return log_energies @ dct.T[:, 1:]
