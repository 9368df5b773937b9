"""Autocorrelation pitch tracking.

Each analysis frame is scored by normalized autocorrelation over the lag
range of the 50-500 Hz search band.  Frames whose best normalized peak
falls below the voicing threshold are marked unvoiced (NaN).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import AudioClip
from .frames import frame_count, next_pow2

F0_MIN = 50.0
F0_MAX = 500.0
VOICING_THRESHOLD = 0.3
DEFAULT_FRAME_MS = 40.0
DEFAULT_HOP_MS = 10.0

# Local maxima within this fraction of the frame's best peak compete as
# period candidates; the shortest lag wins, which suppresses octave errors.
PEAK_CANDIDATE_RATIO = 0.9


@dataclass
class PitchTrack:
    """Per-frame fundamental frequency; NaN marks unvoiced frames."""

    times_s: np.ndarray
    f0_hz: np.ndarray
    frame_hop_s: float
    frame_len_s: float

    @property
    def voiced(self) -> np.ndarray:
        return ~np.isnan(self.f0_hz)

    @property
    def n_frames(self) -> int:
        return len(self.f0_hz)

    def voiced_values(self) -> np.ndarray:
        return self.f0_hz[self.voiced]


def normalized_autocorr(frame: np.ndarray, max_lag: int) -> np.ndarray:
    """Normalized autocorrelation r(lag) for lag = 0..max_lag.

    r(lag) = sum(x[t] x[t+lag]) / sqrt(sum(x[:n-lag]^2) * sum(x[lag:]^2)),
    computed via FFT for the numerator and cumulative sums for the energies.
    """
    n = len(frame)
    size = next_pow2(2 * n)
    spec = np.fft.rfft(frame, size)
    raw = np.fft.irfft(spec * np.conj(spec), size)[: max_lag + 1]

    sq = frame**2
    csum = np.concatenate([[0.0], np.cumsum(sq)])
    lags = np.arange(max_lag + 1)
    head = csum[n - lags] - csum[0]  # energy of x[: n-lag]
    tail = csum[n] - csum[lags]  # energy of x[lag :]
    denom = np.sqrt(head * tail)
    out = np.zeros(max_lag + 1)
    ok = denom > 0
    out[ok] = raw[ok] / denom[ok]
    return out


def _refine_peak(r: np.ndarray, lag: int) -> float:
    """Parabolic interpolation of the peak position around an integer lag."""
    if lag <= 0 or lag >= len(r) - 1:
        return float(lag)
    denom = r[lag - 1] - 2.0 * r[lag] + r[lag + 1]
    if denom == 0:
        return float(lag)
    delta = 0.5 * (r[lag - 1] - r[lag + 1]) / denom
    return lag + float(np.clip(delta, -0.5, 0.5))


def estimate_pitch(
    clip: AudioClip,
    frame_ms: float = DEFAULT_FRAME_MS,
    hop_ms: float = DEFAULT_HOP_MS,
    f0_min: float = F0_MIN,
    f0_max: float = F0_MAX,
    voicing_threshold: float = VOICING_THRESHOLD,
) -> PitchTrack:
    """Track pitch frame by frame; a fully unvoiced result is valid."""
    sr = clip.sample_rate
    flen = int(round(frame_ms * sr / 1000.0))
    hop = int(round(hop_ms * sr / 1000.0))
    lag_min = max(2, int(np.floor(sr / f0_max)))
    lag_max = int(np.ceil(sr / f0_min))
    if lag_max >= flen:
        raise ValueError(
            f"frame of {flen} samples too short for f0_min={f0_min} Hz at {sr} Hz"
        )

    n = frame_count(len(clip.samples), flen, hop)
    times = (np.arange(n) * hop + flen / 2.0) / sr
    f0 = np.full(n, np.nan)

    for i in range(n):
        frame = clip.samples[i * hop : i * hop + flen]
        if not np.any(frame):
            continue
        r = normalized_autocorr(frame, lag_max + 1)
        window = r[lag_min : lag_max + 1]
        best = float(window.max())
        if best < voicing_threshold:
            continue
        # Shortest qualifying local maximum; avoids locking onto 2x/3x periods.
        interior = r[lag_min : lag_max + 1]
        left = r[lag_min - 1 : lag_max]
        right = r[lag_min + 1 : lag_max + 2]
        is_peak = (interior >= left) & (interior >= right)
        qualifies = is_peak & (interior >= PEAK_CANDIDATE_RATIO * best)
        candidates = np.nonzero(qualifies)[0]
        if len(candidates) == 0:
            continue
        lag = int(candidates[0]) + lag_min
        lag_refined = _refine_peak(r, lag)
        f0[i] = float(np.clip(sr / lag_refined, f0_min, f0_max))

    return PitchTrack(
        times_s=times,
        f0_hz=f0,
        frame_hop_s=hop / sr,
        frame_len_s=flen / sr,
    )
