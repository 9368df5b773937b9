import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from neurox.dsp.audio import AudioClip

SR = 16000


def sine_clip(freq_hz: float, duration_s: float = 1.0, amplitude: float = 0.5,
              sample_rate: int = SR, clip_id: str | None = None) -> AudioClip:
    t = np.arange(int(round(duration_s * sample_rate))) / sample_rate
    return AudioClip(amplitude * np.sin(2 * np.pi * freq_hz * t), sample_rate, clip_id)


def silence_clip(duration_s: float = 1.0, sample_rate: int = SR) -> AudioClip:
    return AudioClip(np.zeros(int(round(duration_s * sample_rate))), sample_rate)


def noise_clip(duration_s: float = 1.0, scale: float = 0.3, seed: int = 1234,
               sample_rate: int = SR) -> AudioClip:
    rng = np.random.default_rng(seed)
    return AudioClip(scale * rng.standard_normal(int(duration_s * sample_rate)),
                     sample_rate)


@pytest.fixture
def tone_440() -> AudioClip:
    return sine_clip(440.0)


@pytest.fixture
def silence() -> AudioClip:
    return silence_clip()


# --- dataset fixtures for the CLI layer ------------------------------------

from neurox.dsp.audio import write_wav  # noqa: E402

DEMO_CLIPS = [
    # id, label, split, tone hz, gap (seconds of silence in the middle)
    ("rec_ad_train", "ad", "train", 180.0, 0.6),
    ("rec_cn_train", "cn", "train", 240.0, 0.0),
    ("rec_ad_test", "ad", "test", 170.0, 0.7),
    ("rec_cn_test", "cn", "test", 250.0, 0.0),
]

DEMO_TRANSCRIPTS = {
    "rec_ad_train": "the um the boy is uh taking the the cookies",
    "rec_cn_train": "the boy is taking cookies from the jar while the stool tips",
    "rec_ad_test": "there is a a kitchen and um water",
    "rec_cn_test": "the mother is drying dishes while the sink overflows",
}


def build_demo_dataset(root, duration_s: float = 1.2):
    """Four synthetic WAV clips + manifest + fixture transcript store."""
    import json as _json

    root = Path(root)
    audio_dir = root / "audio"
    store_dir = root / "store"
    audio_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for clip_id, label, split, tone_hz, gap_s in DEMO_CLIPS:
        tone = sine_clip(tone_hz, duration_s=duration_s).samples
        if gap_s > 0:
            half = len(tone) // 2
            signal = np.concatenate([tone[:half], np.zeros(int(gap_s * SR)),
                                     tone[half:]])
        else:
            signal = tone
        write_wav(audio_dir / f"{clip_id}.wav", AudioClip(signal, SR))
        (store_dir / clip_id).mkdir(parents=True, exist_ok=True)
        (store_dir / clip_id / "transcript.txt").write_text(
            DEMO_TRANSCRIPTS[clip_id])
        entries.append({"id": clip_id, "audio_path": f"audio/{clip_id}.wav",
                        "label": label, "split": split})
    manifest_path = root / "manifest.json"
    manifest_path.write_text(_json.dumps({"entries": entries}, indent=2))
    return manifest_path, store_dir


# --- fusion helpers -------------------------------------------------------

from neurox.fusion.config import FusionConfig, Modalities  # noqa: E402
from neurox.fusion.data import FusionSample  # noqa: E402


def reduced_config(**overrides) -> FusionConfig:
    """Desk-scale dims: 6 tokens (2 + 4 text), d_model 16, 2 heads."""
    defaults = dict(
        d_model=16,
        n_heads=2,
        d_ffn=32,
        n_layers=2,
        text_tokens=4,
        acoustic_dim=5,
        speech_dim=16,
        head_hidden=8,
    )
    defaults.update(overrides)
    return FusionConfig(**defaults)


def random_sample(config: FusionConfig, rng, label=None, sample_id="s") -> FusionSample:
    valid_len = int(rng.integers(1, config.text_tokens + 1))
    tokens = np.zeros((config.text_tokens, config.d_model))
    tokens[:valid_len] = rng.standard_normal((valid_len, config.d_model))
    return FusionSample(
        sample_id=sample_id,
        acoustic=rng.standard_normal(config.acoustic_dim),
        speech=rng.standard_normal(config.speech_dim),
        text_tokens=tokens,
        text_valid_len=valid_len,
        label=label,
    )


def separable_dataset(config: FusionConfig, n: int, seed: int = 0,
                      signal: str = "acoustic", scale: float = 2.0):
    """Linearly separable synthetic set: the labeled signal lives in one
    modality; everything else is noise (or constant when signal='text')."""
    rng = np.random.default_rng(seed)
    samples = []
    for i in range(n):
        label = i % 2
        sign = 1.0 if label else -1.0
        sample = random_sample(config, rng, label=label, sample_id=f"syn{i:03d}")
        if signal == "acoustic":
            sample.acoustic = sign * scale * np.ones(config.acoustic_dim)
        elif signal == "text":
            # only text rows carry class information; the other modalities
            # are identical constants across the whole dataset.  The row
            # pattern is zero-mean with spread so it survives layer norm.
            sample.acoustic = np.ones(config.acoustic_dim)
            sample.speech = np.ones(config.speech_dim)
            pattern = np.resize([1.0, -1.0], config.d_model)
            tokens = np.tile(sign * scale * pattern, (config.text_tokens, 1))
            sample.text_tokens = tokens
            sample.text_valid_len = config.text_tokens
        samples.append(sample)
    return samples
