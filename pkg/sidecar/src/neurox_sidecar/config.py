"""Environment-driven sidecar settings."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

PORT_ENV = "SIDECAR_PORT"
BACKEND_ENV = "SIDECAR_BACKEND"
LOAD_4BIT_ENV = "SIDECAR_LOAD_4BIT"
QUEUE_DEPTH_ENV = "SIDECAR_QUEUE_DEPTH"

DEFAULT_MODELS = {
    "asr": "openai/whisper-base",
    "speech": "facebook/wav2vec2-base-960h",
    "text": "microsoft/deberta-v3-base",
    "sentence": "sentence-transformers/all-MiniLM-L6-v2",
    "generator": "google/flan-t5-xl",
}

MODEL_ENV = {
    "asr": "SIDECAR_ASR_MODEL",
    "speech": "SIDECAR_SPEECH_MODEL",
    "text": "SIDECAR_TEXT_MODEL",
    "sentence": "SIDECAR_SENTENCE_MODEL",
    "generator": "SIDECAR_GENERATOR_MODEL",
}


@dataclass(frozen=True)
class Settings:
    backend: str = "transformers"  # or "stub"
    port: int = 8008
    load_4bit: bool = False
    queue_depth: int = 64  # max concurrent requests held by the server
    model_names: dict = field(default_factory=lambda: dict(DEFAULT_MODELS))

    @classmethod
    def from_env(cls) -> "Settings":
        names = {
            key: os.environ.get(env, DEFAULT_MODELS[key])
            for key, env in MODEL_ENV.items()
        }
        return cls(
            backend=os.environ.get(BACKEND_ENV, "transformers"),
            port=int(os.environ.get(PORT_ENV, "8008")),
            load_4bit=os.environ.get(LOAD_4BIT_ENV, "") in ("1", "true", "yes"),
            queue_depth=int(os.environ.get(QUEUE_DEPTH_ENV, "64")),
            model_names=names,
        )
