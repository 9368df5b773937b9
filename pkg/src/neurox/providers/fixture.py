"""Offline fixture providers.

Transcripts come from a directory store keyed by recording id; embeddings
are derived from content hashes unless the store carries an explicit
override file.  Everything is deterministic across processes, so tests
and the end-to-end pipeline run with zero network access.

Store layout: ``<store>/<clip_id>/transcript.txt`` plus optional
``speech_emb.json`` and ``text_enc.json`` overrides.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from ..dsp.audio import AudioClip
from .base import (
    SENTENCE_DIM,
    SPEECH_DIM,
    TEXT_DIM,
    TEXT_TOKENS,
    FixtureMissError,
    Providers,
    TextEncoding,
    check_generation_params,
    pooled_from_tokens,
)
from .hashing import content_vector
from .text import TranscriptText, preprocess_text

_CLASS_RE = re.compile(r"class:\s*(AD|CN)\b", re.IGNORECASE)
_CHUNK_RE = re.compile(r"\[chunk (\d+)\]")


class FixtureProviders(Providers):
    def __init__(self, store_dir: str | Path | None = None):
        self.store_dir = Path(store_dir) if store_dir is not None else None

    def _entry(self, clip_id: str | None, filename: str) -> Path | None:
        if self.store_dir is None or clip_id is None:
            return None
        path = self.store_dir / clip_id / filename
        return path if path.exists() else None

    def transcribe(self, clip: AudioClip) -> TranscriptText:
        path = self._entry(clip.clip_id, "transcript.txt")
        if path is None:
            raise FixtureMissError(
                f"no fixture transcript for clip id {clip.clip_id!r} "
                f"under {self.store_dir}"
            )
        raw = path.read_text(encoding="utf-8").rstrip("\n")
        return TranscriptText(raw=raw, clip_id=clip.clip_id)

    def embed_speech(self, clip: AudioClip) -> np.ndarray:
        path = self._entry(clip.clip_id, "speech_emb.json")
        if path is not None:
            vector = np.asarray(json.loads(path.read_text())["vector"], dtype=np.float64)
            if vector.shape != (SPEECH_DIM,):
                raise FixtureMissError(f"{path}: expected {SPEECH_DIM} dims")
            return vector
        return content_vector("speech", clip.samples.tobytes(), SPEECH_DIM)

    def encode_text(self, transcript: TranscriptText) -> TextEncoding:
        path = self._entry(transcript.clip_id, "text_enc.json")
        if path is not None:
            payload = json.loads(path.read_text())
            return TextEncoding(
                tokens=np.asarray(payload["tokens"], dtype=np.float64),
                pooled=np.asarray(payload["pooled"], dtype=np.float64),
                valid_len=int(payload["valid_len"]),
            )
        words = transcript.words[:TEXT_TOKENS]
        tokens = np.zeros((TEXT_TOKENS, TEXT_DIM))
        for pos, word in enumerate(words):
            tokens[pos] = content_vector(f"token.{pos}", word.encode("utf-8"), TEXT_DIM)
        valid_len = len(words)
        return TextEncoding(
            tokens=tokens,
            pooled=pooled_from_tokens(tokens, valid_len),
            valid_len=valid_len,
        )

    def embed_sentence(self, text: str) -> np.ndarray:
        normalized = preprocess_text(text)
        return content_vector("sentence", normalized.encode("utf-8"), SENTENCE_DIM)

    def generate(
        self, prompt: str, temperature: float, top_p: float, max_tokens: int = 256
    ) -> str:
        check_generation_params(temperature, top_p)
        class_match = _CLASS_RE.search(prompt)
        label = class_match.group(1).upper() if class_match else "UNKNOWN"
        chunk_ids = _CHUNK_RE.findall(prompt)
        citations = " ".join(f"[chunk {cid}]" for cid in chunk_ids)
        body = (
            f"Predicted class: {label}. "
            f"The retrieved literature {citations} describes speech markers "
            "consistent with the measured acoustic and linguistic profile; "
            "see the cited passages for the supporting evidence."
        )
        words = body.split()
        return " ".join(words[:max_tokens])
