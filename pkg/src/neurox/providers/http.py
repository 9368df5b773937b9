"""HTTP providers speaking the model-sidecar wire protocol.

Endpoints: POST /v1/asr, /v1/embed/speech, /v1/embed/text,
/v1/embed/sentence, /v1/generate.  Float arrays travel as JSON numbers.
Concurrent in-flight requests are bounded by a semaphore (default 4).
"""

from __future__ import annotations

import base64
import os
import threading

import httpx
import numpy as np

from ..dsp.audio import AudioClip, wav_bytes
from .base import (
    SENTENCE_DIM,
    SPEECH_DIM,
    TEXT_DIM,
    TEXT_TOKENS,
    GenerationTimeout,
    Providers,
    TextEncoding,
    TransportError,
    check_generation_params,
)
from .text import TranscriptText

SIDECAR_URL_ENV = "NEUROX_SIDECAR_URL"
DEFAULT_SIDECAR_URL = "http://127.0.0.1:8008"


def sidecar_url(configured: str | None = None) -> str:
    return os.environ.get(SIDECAR_URL_ENV) or configured or DEFAULT_SIDECAR_URL


class HttpProviders(Providers):
    def __init__(
        self,
        base_url: str | None = None,
        timeout_s: float = 60.0,
        max_in_flight: int = 4,
        transport: httpx.BaseTransport | None = None,
    ):
        self.base_url = sidecar_url(base_url).rstrip("/")
        self._client = httpx.Client(timeout=timeout_s, transport=transport)
        self._slots = threading.Semaphore(max_in_flight)

    def close(self) -> None:
        self._client.close()

    def _post(self, stage: str, path: str, payload: dict) -> dict:
        try:
            with self._slots:
                response = self._client.post(self.base_url + path, json=payload)
        except httpx.TimeoutException as exc:
            raise GenerationTimeout(stage, f"timed out: {exc}") from exc
        except httpx.HTTPError as exc:
            raise TransportError(stage, f"request failed: {exc}") from exc
        if response.status_code != 200:
            detail = _error_detail(response)
            raise TransportError(stage, f"HTTP {response.status_code}: {detail}")
        return response.json()

    def _audio_payload(self, clip: AudioClip) -> dict:
        return {"audio": base64.b64encode(wav_bytes(clip)).decode("ascii")}

    def transcribe(self, clip: AudioClip) -> TranscriptText:
        body = self._post("asr", "/v1/asr", self._audio_payload(clip))
        return TranscriptText(raw=str(body["text"]), clip_id=clip.clip_id)

    def embed_speech(self, clip: AudioClip) -> np.ndarray:
        body = self._post("embed_speech", "/v1/embed/speech", self._audio_payload(clip))
        vector = np.asarray(body["vector"], dtype=np.float64)
        if vector.shape != (SPEECH_DIM,):
            raise TransportError("embed_speech", f"bad vector shape {vector.shape}")
        return vector

    def encode_text(self, transcript: TranscriptText) -> TextEncoding:
        body = self._post("embed_text", "/v1/embed/text", {"text": transcript.normalized})
        tokens = np.asarray(body["tokens"], dtype=np.float64)
        pooled = np.asarray(body["pooled"], dtype=np.float64)
        valid_len = int(body["valid_len"])
        if tokens.shape != (TEXT_TOKENS, TEXT_DIM):
            raise TransportError("embed_text", f"bad token shape {tokens.shape}")
        tokens[valid_len:] = 0.0  # enforce the padding contract client-side
        return TextEncoding(tokens=tokens, pooled=pooled, valid_len=valid_len)

    def embed_sentence(self, text: str) -> np.ndarray:
        body = self._post("embed_sentence", "/v1/embed/sentence", {"text": text})
        vector = np.asarray(body["vector"], dtype=np.float64)
        if vector.shape != (SENTENCE_DIM,):
            raise TransportError("embed_sentence", f"bad vector shape {vector.shape}")
        return vector

    def generate(
        self, prompt: str, temperature: float, top_p: float, max_tokens: int = 256
    ) -> str:
        check_generation_params(temperature, top_p)
        body = self._post(
            "generate",
            "/v1/generate",
            {
                "prompt": prompt,
                "temperature": temperature,
                "top_p": top_p,
                "max_tokens": max_tokens,
            },
        )
        return str(body["text"])


def _error_detail(response: httpx.Response) -> str:
    try:
        body = response.json()
        return f"{body.get('error', '?')} (stage {body.get('stage', '?')})"
    except Exception:
        return response.text[:200]
