"""Frame-level spectral shape and intensity statistics."""

from __future__ import annotations

import numpy as np

from .audio import AudioClip
from .frames import frame_rms, frame_signal, hann_window, next_pow2
from .mfcc import FRAME_MS, HOP_MS

ROLLOFF_FRACTION = 0.85
RMS_DB_FLOOR = 1e-10


def _magnitudes(clip: AudioClip, frame_ms: float, hop_ms: float):
    sr = clip.sample_rate
    flen = int(round(frame_ms * sr / 1000.0))
    hop = int(round(hop_ms * sr / 1000.0))
    frames = frame_signal(clip.samples, flen, hop)
    windowed = frames * hann_window(flen)
    n_fft = next_pow2(flen)
    mags = np.abs(np.fft.rfft(windowed, n_fft, axis=-1))
    freqs = np.arange(n_fft // 2 + 1) * (sr / n_fft)
    return frames, mags, freqs


def spectral_stats(
    clip: AudioClip, frame_ms: float = FRAME_MS, hop_ms: float = HOP_MS
) -> dict[str, float]:
    """Centroid, 85% rolloff, and flux summarized as means and stds.

    Frames with an empty spectrum are skipped; when nothing remains (e.g.
    digital silence) every statistic comes back NaN so the caller can mask it.
    """
    frames, mags, freqs = _magnitudes(clip, frame_ms, hop_ms)
    power = mags**2
    total = power.sum(axis=1)
    live = total > 0

    out = {k: float("nan") for k in (
        "centroid_mean", "centroid_std", "rolloff_mean", "rolloff_std",
        "flux_mean", "flux_std",
    )}
    if np.any(live):
        centroid = (mags[live] * freqs).sum(axis=1) / mags[live].sum(axis=1)
        out["centroid_mean"] = float(centroid.mean())
        out["centroid_std"] = float(centroid.std())

        cum = np.cumsum(power[live], axis=1)
        idx = np.argmax(cum >= ROLLOFF_FRACTION * total[live][:, None], axis=1)
        rolloff = freqs[idx]
        out["rolloff_mean"] = float(rolloff.mean())
        out["rolloff_std"] = float(rolloff.std())

    if mags.shape[0] >= 2:
        flux = np.sqrt(((np.diff(mags, axis=0)) ** 2).sum(axis=1))
        out["flux_mean"] = float(flux.mean())
        out["flux_std"] = float(flux.std())
    return out


def intensity_stats(
    clip: AudioClip, frame_ms: float = FRAME_MS, hop_ms: float = HOP_MS
) -> tuple[float, float]:
    """Mean and std of frame RMS in dB over frames with any energy (NaN otherwise)."""
    sr = clip.sample_rate
    flen = int(round(frame_ms * sr / 1000.0))
    hop = int(round(hop_ms * sr / 1000.0))
    rms = frame_rms(frame_signal(clip.samples, flen, hop))
    rms = rms[rms > 0]
    if len(rms) == 0:
        return float("nan"), float("nan")
    db = 20.0 * np.log10(np.maximum(rms, RMS_DB_FLOOR))
    return float(db.mean()), float(db.std())
