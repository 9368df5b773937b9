"""Energy-threshold voice activity detection.

Frame RMS energy is compared against a threshold set relative to the
clip's 95th-percentile frame energy, so the detector adapts to the
recording level without any learned components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import AudioClip

SPEECH = "speech"
PAUSE = "pause"

DEFAULT_FRAME_MS = 25.0
DEFAULT_THRESHOLD_DB = -35.0
DEFAULT_MIN_PAUSE_MS = 150.0


@dataclass(frozen=True)
class Segment:
    start_s: float
    end_s: float
    kind: str

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


@dataclass
class VoicingSegments:
    """Ordered, non-overlapping speech/pause segments tiling [0, total_duration_s]."""

    segments: list[Segment]
    total_duration_s: float

    def _duration(self, kind: str) -> float:
        return sum(s.duration_s for s in self.segments if s.kind == kind)

    @property
    def speech_ratio(self) -> float:
        if self.total_duration_s == 0:
            return 0.0
        return self._duration(SPEECH) / self.total_duration_s

    @property
    def pause_ratio(self) -> float:
        if self.total_duration_s == 0:
            return 0.0
        return self._duration(PAUSE) / self.total_duration_s

    def count(self, kind: str) -> int:
        return sum(1 for s in self.segments if s.kind == kind)

    def durations(self, kind: str) -> list[float]:
        return [s.duration_s for s in self.segments if s.kind == kind]


def detect_speech_pauses(
    clip: AudioClip,
    frame_ms: float = DEFAULT_FRAME_MS,
    energy_threshold_db: float = DEFAULT_THRESHOLD_DB,
    min_pause_ms: float = DEFAULT_MIN_PAUSE_MS,
) -> VoicingSegments:
    """Segment a clip into speech and pause regions.

    Frames are consecutive non-overlapping tiles of ``frame_ms`` (the final
    partial frame is kept), classified as speech when their RMS exceeds the
    95th-percentile frame RMS scaled by ``energy_threshold_db``.  Adjacent
    same-kind frames are merged; pauses shorter than ``min_pause_ms`` that
    touch speech are absorbed into it.  An all-silence clip yields a single
    pause segment.
    """
    if frame_ms <= 0:
        raise ValueError("frame_ms must be positive")
    samples = clip.samples
    if len(samples) == 0:
        return VoicingSegments(segments=[], total_duration_s=0.0)

    sr = clip.sample_rate
    total_s = len(samples) / sr
    flen = max(1, int(round(frame_ms * sr / 1000.0)))
    bounds = list(range(0, len(samples), flen)) + [len(samples)]

    rms = np.array(
        [np.sqrt(np.mean(samples[a:b] ** 2)) for a, b in zip(bounds[:-1], bounds[1:])]
    )
    ref = np.percentile(rms, 95)
    threshold = ref * 10.0 ** (energy_threshold_db / 20.0)
    is_speech = rms > threshold

    # Run-length merge of frame labels into raw segments.
    segments: list[list] = []
    for i, speech in enumerate(is_speech):
        kind = SPEECH if speech else PAUSE
        start = bounds[i] / sr
        end = bounds[i + 1] / sr
        if segments and segments[-1][2] == kind:
            segments[-1][1] = end
        else:
            segments.append([start, end, kind])

    # Absorb short pauses into adjacent speech; a lone all-pause clip stays a pause.
    min_pause_s = min_pause_ms / 1000.0
    for i, seg in enumerate(segments):
        if seg[2] != PAUSE or seg[1] - seg[0] >= min_pause_s:
            continue
        prev_speech = i > 0 and segments[i - 1][2] == SPEECH
        next_speech = i + 1 < len(segments) and segments[i + 1][2] == SPEECH
        if prev_speech or next_speech:
            seg[2] = SPEECH

    merged: list[Segment] = []
    for start, end, kind in segments:
        if merged and merged[-1].kind == kind:
            merged[-1] = Segment(merged[-1].start_s, end, kind)
        else:
            merged.append(Segment(start, end, kind))

    # Pin the final boundary so the segments tile [0, total] exactly.
    if merged:
        last = merged[-1]
        merged[-1] = Segment(last.start_s, total_s, last.kind)
    return VoicingSegments(segments=merged, total_duration_s=total_s)
