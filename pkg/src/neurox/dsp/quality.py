"""Voice quality: jitter, shimmer, and harmonics-to-noise ratio.

All three are defined over runs of at least three consecutive voiced
frames of a pitch track; without such a run the result is NaN-masked
rather than an error, since fully unvoiced audio is a legitimate input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import AudioClip
from .pitch import PitchTrack, normalized_autocorr

MIN_RUN = 3
HNR_R_CLAMP = 1e-12


@dataclass(frozen=True)
class VoiceQuality:
    jitter_pct: float
    shimmer_pct: float
    hnr_db: float

    @property
    def defined(self) -> bool:
        return not np.isnan(self.jitter_pct)


def _voiced_runs(voiced: np.ndarray) -> list[tuple[int, int]]:
    runs = []
    start = None
    for i, v in enumerate(voiced):
        if v and start is None:
            start = i
        elif not v and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(voiced)))
    return [(a, b) for a, b in runs if b - a >= MIN_RUN]


def compute_voice_quality(clip: AudioClip, pitch: PitchTrack) -> VoiceQuality:
    """Cycle-to-cycle stability metrics for the voiced portions of a clip.

    jitter%  = mean |period[i+1] - period[i]| / mean period x 100
    shimmer% = mean |peak[i+1] - peak[i]| / mean peak x 100
    hnr dB   = mean of 10*log10(r / (1 - r)) at each frame's pitch lag,
    with consecutive pairs taken inside voiced runs only.
    """
    sr = clip.sample_rate
    flen = int(round(pitch.frame_len_s * sr))
    hop = int(round(pitch.frame_hop_s * sr))
    runs = _voiced_runs(pitch.voiced)
    if not runs:
        return VoiceQuality(float("nan"), float("nan"), float("nan"))

    periods, peaks, hnr_terms = [], [], []
    period_diffs, peak_diffs = [], []
    for a, b in runs:
        run_periods, run_peaks = [], []
        for i in range(a, b):
            f0 = pitch.f0_hz[i]
            frame = clip.samples[i * hop : i * hop + flen]
            lag = int(round(sr / f0))
            r = normalized_autocorr(frame, lag)[lag]
            r = float(np.clip(r, HNR_R_CLAMP, 1.0 - HNR_R_CLAMP))
            hnr_terms.append(10.0 * np.log10(r / (1.0 - r)))
            run_periods.append(1.0 / f0)
            run_peaks.append(float(np.max(np.abs(frame))))
        period_diffs.extend(np.abs(np.diff(run_periods)))
        peak_diffs.extend(np.abs(np.diff(run_peaks)))
        periods.extend(run_periods)
        peaks.extend(run_peaks)

    jitter = 100.0 * float(np.mean(period_diffs)) / float(np.mean(periods))
    mean_peak = float(np.mean(peaks))
    shimmer = (
        100.0 * float(np.mean(peak_diffs)) / mean_peak if mean_peak > 0 else float("nan")
    )
    return VoiceQuality(jitter, shimmer, float(np.mean(hnr_terms)))
