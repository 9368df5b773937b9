"""Decode the base64 WAV payloads arriving on the wire."""

from __future__ import annotations

import base64
import binascii
import io
import wave

import numpy as np


class BadAudio(ValueError):
    """Payload is not decodable 16-bit PCM WAV."""


def decode_wav_payload(audio_b64: str) -> tuple[np.ndarray, int]:
    """base64 WAV string -> (mono float64 samples in [-1, 1], sample rate)."""
    if not audio_b64:
        raise BadAudio("empty audio payload")
    try:
        raw = base64.b64decode(audio_b64, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise BadAudio(f"malformed base64: {exc}") from exc
    if not raw:
        raise BadAudio("zero-byte audio")
    try:
        with wave.open(io.BytesIO(raw), "rb") as wav:
            channels = wav.getnchannels()
            width = wav.getsampwidth()
            rate = wav.getframerate()
            frames = wav.readframes(wav.getnframes())
    except (wave.Error, EOFError) as exc:
        raise BadAudio(f"not a WAV stream: {exc}") from exc
    if width != 2:
        raise BadAudio(f"expected 16-bit PCM, got {8 * width}-bit")
    if channels not in (1, 2):
        raise BadAudio(f"expected 1 or 2 channels, got {channels}")
    samples = np.frombuffer(frames, dtype="<i2").astype(np.float64) / 32768.0
    if channels == 2:
        samples = samples.reshape(-1, 2).mean(axis=1)
    if len(samples) == 0:
        raise BadAudio("audio stream has zero samples")
    return samples, rate
