#!/usr/bin/env python3
"""Synthesize the 4-clip demo dataset: WAVs, manifest, fixture store, config.

Usage: python3 tools/make_demo_data.py <output-dir>
"""

import json
import sys
from pathlib import Path

import numpy as np

from neurox.dsp.audio import AudioClip, write_wav

SR = 16000

CLIPS = [
    ("rec_ad_train", "ad", "train", 180.0, 0.6),
    ("rec_cn_train", "cn", "train", 240.0, 0.0),
    ("rec_ad_test", "ad", "test", 170.0, 0.7),
    ("rec_cn_test", "cn", "test", 250.0, 0.0),
]

TRANSCRIPTS = {
    "rec_ad_train": "the um the boy is uh taking the the cookies",
    "rec_cn_train": "the boy is taking cookies from the jar while the stool tips",
    "rec_ad_test": "there is a a kitchen and um water",
    "rec_cn_test": "the mother is drying dishes while the sink overflows",
}


def main(out_dir: str) -> None:
    root = Path(out_dir)
    audio_dir = root / "audio"
    store_dir = root / "store"
    audio_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    for clip_id, label, split, tone_hz, gap_s in CLIPS:
        t = np.arange(int(1.2 * SR)) / SR
        tone = 0.5 * np.sin(2 * np.pi * tone_hz * t)
        if gap_s > 0:
            half = len(tone) // 2
            tone = np.concatenate([tone[:half], np.zeros(int(gap_s * SR)),
                                   tone[half:]])
        write_wav(audio_dir / f"{clip_id}.wav", AudioClip(tone, SR))
        clip_store = store_dir / clip_id
        clip_store.mkdir(parents=True, exist_ok=True)
        (clip_store / "transcript.txt").write_text(TRANSCRIPTS[clip_id])
        entries.append({"id": clip_id, "audio_path": f"audio/{clip_id}.wav",
                        "label": label, "split": split})

    (root / "manifest.json").write_text(json.dumps({"entries": entries}, indent=2))
    (root / "run.json").write_text(json.dumps({
        "providers": "fixture",
        "fixture_store": str(store_dir),
        "artifacts_dir": str(root / "artifacts"),
        "seed": 3,
        "training": {"max_epochs": 2, "learning_rate": 1e-4, "batch_size": 2,
                     "seed": 3},
    }, indent=2))
    print(f"wrote demo dataset under {root}")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit(__doc__.strip())
    main(sys.argv[1])
