"""Per-recording extraction artifacts on disk.

Each recording id owns four JSON files under <artifacts>/features/:
<id>.acoustic.json, <id>.transcript.json, <id>.speech_emb.json, and
<id>.text_enc.json.  Writes are atomic (tmp file + rename) so an
interrupted run never leaves a half-written artifact behind.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .dsp.features import SCHEMA_VERSION, AcousticFeatureVector
from .providers.base import TextEncoding, pooled_from_tokens
from .providers.text import TranscriptText

KINDS = ("acoustic", "transcript", "speech_emb", "text_enc")


class ArtifactError(ValueError):
    pass


def _write_json(path: Path, payload: dict) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True))
    os.replace(tmp, path)


class FeatureStore:
    def __init__(self, artifacts_dir: str | Path):
        self.root = Path(artifacts_dir) / "features"
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, entry_id: str, kind: str) -> Path:
        if kind not in KINDS:
            raise ValueError(f"unknown artifact kind {kind!r}")
        return self.root / f"{entry_id}.{kind}.json"

    def has_all(self, entry_id: str) -> bool:
        return all(self.path(entry_id, kind).exists() for kind in KINDS)

    def missing_ids(self, ids: list[str]) -> list[str]:
        return [i for i in ids if not self.has_all(i)]

    def write_all(
        self,
        entry_id: str,
        features: AcousticFeatureVector,
        transcript: TranscriptText,
        speech_embedding: np.ndarray,
        text_encoding: TextEncoding,
    ) -> None:
        _write_json(self.path(entry_id, "acoustic"), features.to_json_dict())
        _write_json(self.path(entry_id, "transcript"), {
            "schema_version": SCHEMA_VERSION,
            "raw": transcript.raw,
            "normalized": transcript.normalized,
        })
        _write_json(self.path(entry_id, "speech_emb"), {
            "schema_version": SCHEMA_VERSION,
            "vector": speech_embedding.tolist(),
        })
        _write_json(self.path(entry_id, "text_enc"), {
            "schema_version": SCHEMA_VERSION,
            "tokens": text_encoding.tokens.tolist(),
            "pooled": text_encoding.pooled.tolist(),
            "valid_len": text_encoding.valid_len,
        })

    def _read(self, entry_id: str, kind: str) -> dict:
        path = self.path(entry_id, kind)
        if not path.exists():
            raise ArtifactError(f"missing {kind} artifact for {entry_id!r}: {path}")
        return json.loads(path.read_text())

    def read_features(self, entry_id: str) -> AcousticFeatureVector:
        return AcousticFeatureVector.from_json_dict(self._read(entry_id, "acoustic"))

    def read_transcript(self, entry_id: str) -> TranscriptText:
        payload = self._read(entry_id, "transcript")
        return TranscriptText(raw=payload["raw"], normalized=payload["normalized"],
                              clip_id=entry_id)

    def read_speech_embedding(self, entry_id: str) -> np.ndarray:
        return np.asarray(self._read(entry_id, "speech_emb")["vector"])

    def read_text_encoding(self, entry_id: str) -> TextEncoding:
        payload = self._read(entry_id, "text_enc")
        tokens = np.asarray(payload["tokens"])
        valid_len = int(payload["valid_len"])
        pooled = payload.get("pooled")
        return TextEncoding(
            tokens=tokens,
            pooled=np.asarray(pooled) if pooled is not None
            else pooled_from_tokens(tokens, valid_len),
            valid_len=valid_len,
        )
