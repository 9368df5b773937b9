"""WAV loading, resampling, and encoding for the acoustic front end.

Only 16-bit PCM WAV is accepted.  Stereo input is downmixed to mono by
channel mean and samples are scaled to [-1, 1].
"""

from __future__ import annotations

import io
import wave
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

INT16_SCALE = 32768.0


class AudioFormatError(ValueError):
    """Raised for unreadable files or encodings other than 16-bit PCM."""


@dataclass(eq=False)
class AudioClip:
    """Mono audio: float64 samples in [-1, 1] plus the sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int
    clip_id: str | None = None

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("AudioClip samples must be a 1-D array")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


def load_audio(path: str | Path) -> AudioClip:
    """Read a 16-bit PCM WAV file (1 or 2 channels) into an AudioClip.

    Stereo is downmixed by channel mean.  The clip id defaults to the
    file stem so fixture stores can be keyed by recording.
    """
    path = Path(path)
    try:
        with wave.open(str(path), "rb") as wav:
            n_channels = wav.getnchannels()
            sample_width = wav.getsampwidth()
            sample_rate = wav.getframerate()
            n_frames = wav.getnframes()
            raw = wav.readframes(n_frames)
    except (wave.Error, EOFError) as exc:
        raise AudioFormatError(f"{path}: not a readable WAV file ({exc})") from exc
    except OSError as exc:
        raise AudioFormatError(f"{path}: cannot read file ({exc})") from exc

    if sample_width != 2:
        raise AudioFormatError(
            f"{path}: unsupported encoding ({8 * sample_width}-bit); expected 16-bit PCM"
        )
    if n_channels not in (1, 2):
        raise AudioFormatError(f"{path}: expected 1 or 2 channels, got {n_channels}")

    data = np.frombuffer(raw, dtype="<i2").astype(np.float64) / INT16_SCALE
    if n_channels == 2:
        data = data.reshape(-1, 2).mean(axis=1)
    return AudioClip(samples=data, sample_rate=sample_rate, clip_id=path.stem)


def resample(clip: AudioClip, target_hz: int) -> AudioClip:
    """Resample by linear interpolation, preserving duration within one sample period."""
    if target_hz <= 0:
        raise ValueError(f"target_hz must be positive, got {target_hz}")
    if target_hz == clip.sample_rate:
        return replace(clip)
    n_in = len(clip.samples)
    n_out = int(round(n_in * target_hz / clip.sample_rate))
    if n_in == 0 or n_out == 0:
        return AudioClip(np.zeros(n_out), target_hz, clip.clip_id)
    t_in = np.arange(n_in) / clip.sample_rate
    t_out = np.arange(n_out) / target_hz
    out = np.interp(t_out, t_in, clip.samples)
    return AudioClip(out, target_hz, clip.clip_id)


def wav_bytes(clip: AudioClip) -> bytes:
    """Encode a clip as 16-bit PCM mono WAV bytes (used on the provider wire)."""
    pcm = np.clip(np.round(clip.samples * INT16_SCALE), -32768, 32767).astype("<i2")
    buf = io.BytesIO()
    with wave.open(buf, "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(clip.sample_rate)
        wav.writeframes(pcm.tobytes())
    return buf.getvalue()


def write_wav(path: str | Path, clip: AudioClip) -> None:
    Path(path).write_bytes(wav_bytes(clip))
