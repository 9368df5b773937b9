import wave

import numpy as np
import pytest

from neurox.dsp.audio import AudioFormatError, load_audio, resample, wav_bytes

from conftest import sine_clip


def write_pcm16(path, data_int16, sample_rate=16000, channels=1, sampwidth=2):
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(channels)
        wav.setsampwidth(sampwidth)
        wav.setframerate(sample_rate)
        wav.writeframes(np.asarray(data_int16).astype("<i2").tobytes())


def test_load_silence_mono(tmp_path):
    path = tmp_path / "silence.wav"
    write_pcm16(path, np.zeros(16000, dtype=np.int16))
    clip = load_audio(path)
    assert clip.sample_rate == 16000
    assert len(clip.samples) == 16000
    assert np.all(clip.samples == 0.0)
    assert clip.clip_id == "silence"


def test_stereo_identical_channels_downmix(tmp_path):
    mono = (np.sin(2 * np.pi * 100 * np.arange(8000) / 16000) * 10000).astype(np.int16)
    stereo = np.column_stack([mono, mono]).reshape(-1)
    path = tmp_path / "dup.wav"
    write_pcm16(path, stereo, channels=2)
    clip = load_audio(path)
    np.testing.assert_array_equal(clip.samples, mono.astype(np.float64) / 32768.0)


def test_stereo_opposite_channels_cancel(tmp_path):
    # channels at +0.5 / -0.5 average to exactly zero
    left = np.full(1000, 16384, dtype=np.int16)
    right = np.full(1000, -16384, dtype=np.int16)
    path = tmp_path / "opp.wav"
    write_pcm16(path, np.column_stack([left, right]).reshape(-1), channels=2)
    clip = load_audio(path)
    assert np.all(clip.samples == 0.0)


def test_unsupported_sample_width_rejected(tmp_path):
    path = tmp_path / "8bit.wav"
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(1)
        wav.setframerate(16000)
        wav.writeframes(bytes(100))
    with pytest.raises(AudioFormatError, match="16-bit"):
        load_audio(path)


def test_garbage_file_rejected(tmp_path):
    path = tmp_path / "nope.wav"
    path.write_bytes(b"this is not audio at all")
    with pytest.raises(AudioFormatError):
        load_audio(path)


def test_resample_identity_is_bitwise(tone_440):
    out = resample(tone_440, 16000)
    np.testing.assert_array_equal(out.samples, tone_440.samples)
    assert out.sample_rate == 16000


def test_resample_doubles_length():
    clip = sine_clip(200.0, duration_s=1.0, sample_rate=8000)
    out = resample(clip, 16000)
    assert out.sample_rate == 16000
    assert len(out.samples) == 16000


def test_resample_preserves_dominant_frequency():
    # DFT oracle on the resampled output: 1 s window gives 1 Hz bins.
    clip = sine_clip(440.0, duration_s=1.0, sample_rate=44100)
    out = resample(clip, 16000)
    spectrum = np.abs(np.fft.rfft(out.samples[:16000]))
    peak_hz = np.argmax(spectrum) * 16000 / 16000
    assert abs(peak_hz - 440.0) <= 2.0


def test_wav_bytes_round_trip(tmp_path, tone_440):
    path = tmp_path / "rt.wav"
    path.write_bytes(wav_bytes(tone_440))
    back = load_audio(path)
    assert back.sample_rate == tone_440.sample_rate
    assert len(back.samples) == len(tone_440.samples)
    # 16-bit quantization bounds the round-trip error
    assert np.max(np.abs(back.samples - tone_440.samples)) < 1.0 / 32768.0
