"""The frozen 47-slot acoustic feature schema and its extractor.

Slot order is versioned and never reordered within a schema version.
Undefined slots (e.g. jitter on fully unvoiced audio) carry NaN in memory
and are flagged in an explicit mask; serialization writes them as null so
a missing value can never be confused with a measured zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import AudioClip
from .mfcc import compute_mfcc
from .pitch import estimate_pitch
from .quality import compute_voice_quality
from .spectral import intensity_stats, spectral_stats
from .vad import PAUSE, SPEECH, detect_speech_pauses

SCHEMA_VERSION = 1
EXPECTED_SAMPLE_RATE = 16000

FEATURE_NAMES: tuple[str, ...] = (
    *[f"mfcc{i:02d}_mean" for i in range(1, 14)],
    *[f"mfcc{i:02d}_std" for i in range(1, 14)],
    "jitter_pct",
    "shimmer_pct",
    "hnr_db",
    "pitch_mean_hz",
    "pitch_std_hz",
    "intensity_mean_db",
    "intensity_std_db",
    "speech_ratio",
    "pause_ratio",
    "speech_rate_per_s",
    "mean_pause_s",
    "pause_count",
    "total_duration_s",
    "articulation_rate_per_s",
    "mean_voiced_run_s",
    "spectral_centroid_mean_hz",
    "spectral_centroid_std_hz",
    "spectral_rolloff85_mean_hz",
    "spectral_rolloff85_std_hz",
    "spectral_flux_mean",
    "spectral_flux_std",
)

N_FEATURES = len(FEATURE_NAMES)
assert N_FEATURES == 47

_INDEX = {name: i for i, name in enumerate(FEATURE_NAMES)}


@dataclass
class AcousticFeatureVector:
    """47 named values plus a mask marking undefined entries (True = missing)."""

    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.values.shape != (N_FEATURES,) or self.mask.shape != (N_FEATURES,):
            raise ValueError(f"feature vector must have exactly {N_FEATURES} slots")

    def __getitem__(self, name: str) -> float:
        return float(self.values[_INDEX[name]])

    def is_masked(self, name: str) -> bool:
        return bool(self.mask[_INDEX[name]])

    def to_json_dict(self) -> dict:
        values = [
            None if m else float(v) for v, m in zip(self.values, self.mask)
        ]
        return {
            "schema_version": SCHEMA_VERSION,
            "values": values,
            "mask": [bool(m) for m in self.mask],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "AcousticFeatureVector":
        if payload.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(
                f"unsupported feature schema version {payload.get('schema_version')!r}"
            )
        mask = np.asarray(payload["mask"], dtype=bool)
        values = np.array(
            [np.nan if v is None else float(v) for v in payload["values"]],
            dtype=np.float64,
        )
        return cls(values=values, mask=mask)


class _Builder:
    def __init__(self) -> None:
        self.values = np.full(N_FEATURES, np.nan)

    def set(self, name: str, value: float) -> None:
        self.values[_INDEX[name]] = value

    def finish(self) -> AcousticFeatureVector:
        mask = np.isnan(self.values)
        return AcousticFeatureVector(values=self.values, mask=mask)


def extract_acoustic_features(clip: AudioClip) -> AcousticFeatureVector:
    """Populate the 47-slot schema from a mono 16 kHz clip.

    Pure function of the sample array: identical input gives a bitwise
    identical vector.  Degenerate audio masks slots instead of raising.
    """
    if clip.sample_rate != EXPECTED_SAMPLE_RATE:
        raise ValueError(
            f"expected {EXPECTED_SAMPLE_RATE} Hz input, got {clip.sample_rate} Hz; resample first"
        )
    if len(clip.samples) == 0:
        raise ValueError("cannot extract features from an empty clip")

    b = _Builder()

    mfcc = compute_mfcc(clip, n_coeff=13)
    for i in range(13):
        b.set(f"mfcc{i + 1:02d}_mean", float(mfcc[:, i].mean()))
        b.set(f"mfcc{i + 1:02d}_std", float(mfcc[:, i].std()))

    pitch = estimate_pitch(clip)
    quality = compute_voice_quality(clip, pitch)
    b.set("jitter_pct", quality.jitter_pct)
    b.set("shimmer_pct", quality.shimmer_pct)
    b.set("hnr_db", quality.hnr_db)

    voiced = pitch.voiced_values()
    if len(voiced) > 0:
        b.set("pitch_mean_hz", float(voiced.mean()))
        b.set("pitch_std_hz", float(voiced.std()))

    loudness_mean, loudness_std = intensity_stats(clip)
    b.set("intensity_mean_db", loudness_mean)
    b.set("intensity_std_db", loudness_std)

    voicing = detect_speech_pauses(clip)
    total = voicing.total_duration_s
    speech_time = sum(voicing.durations(SPEECH))
    pauses = voicing.durations(PAUSE)
    b.set("speech_ratio", voicing.speech_ratio)
    b.set("pause_ratio", voicing.pause_ratio)
    b.set("speech_rate_per_s", voicing.count(SPEECH) / total)
    if pauses:
        b.set("mean_pause_s", float(np.mean(pauses)))
    b.set("pause_count", float(len(pauses)))
    b.set("total_duration_s", total)

    if speech_time > 0:
        b.set("articulation_rate_per_s", int(pitch.voiced.sum()) / speech_time)
    run_lengths = _run_lengths(pitch.voiced)
    if run_lengths:
        b.set("mean_voiced_run_s", float(np.mean(run_lengths)) * pitch.frame_hop_s)

    spec = spectral_stats(clip)
    b.set("spectral_centroid_mean_hz", spec["centroid_mean"])
    b.set("spectral_centroid_std_hz", spec["centroid_std"])
    b.set("spectral_rolloff85_mean_hz", spec["rolloff_mean"])
    b.set("spectral_rolloff85_std_hz", spec["rolloff_std"])
    b.set("spectral_flux_mean", spec["flux_mean"])
    b.set("spectral_flux_std", spec["flux_std"])

    return b.finish()


def _run_lengths(flags: np.ndarray) -> list[int]:
    lengths, count = [], 0
    for v in flags:
        if v:
            count += 1
        elif count:
            lengths.append(count)
            count = 0
    if count:
        lengths.append(count)
    return lengths
