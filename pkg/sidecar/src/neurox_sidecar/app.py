"""FastAPI application exposing the five model endpoints.

Wire contract (JSON bodies, float arrays as plain numbers):
    POST /v1/asr            {audio: base64 WAV}    -> {text}
    POST /v1/embed/speech   {audio: base64 WAV}    -> {vector: [768]}
    POST /v1/embed/text     {text}                 -> {tokens: [512][768],
                                                       pooled: [768], valid_len}
    POST /v1/embed/sentence {text}                 -> {vector: [384]}
    POST /v1/generate       {prompt, temperature, top_p, max_tokens} -> {text}
    GET  /healthz           -> {backend, loaded: {...}}

Non-2xx responses carry {error, stage}.  Response dimensions are asserted
server-side before anything leaves the process.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .audio import BadAudio, decode_wav_payload
from .backends import (
    SENTENCE_DIM,
    SPEECH_DIM,
    TEXT_DIM,
    TEXT_TOKENS,
    Backend,
    ModelNotLoaded,
    make_backend,
)
from .config import Settings


class AudioRequest(BaseModel):
    audio: str


class TextRequest(BaseModel):
    text: str


class GenerateRequest(BaseModel):
    prompt: str
    temperature: float = 0.7
    top_p: float = 0.9
    max_tokens: int = Field(default=256, ge=1)


class WireViolation(AssertionError):
    pass


def _require(condition: bool, stage: str, message: str) -> None:
    if not condition:
        raise WireViolation(f"{stage}: {message}")


def create_app(settings: Settings | None = None,
               backend: Backend | None = None) -> FastAPI:
    settings = settings or Settings.from_env()
    backend = backend or make_backend(settings)
    app = FastAPI(title="neurox model sidecar")
    app.state.backend = backend

    def error(stage: str, status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status,
                            content={"error": message, "stage": stage})

    def run(stage: str, fn):
        try:
            return fn()
        except BadAudio as exc:
            return error(stage, 400, str(exc))
        except ValueError as exc:
            return error(stage, 400, str(exc))
        except ModelNotLoaded as exc:
            return error(stage, 503, str(exc))
        except WireViolation as exc:
            return error(stage, 500, str(exc))

    @app.get("/healthz")
    def healthz():
        return {"backend": backend.name, "loaded": backend.loaded()}

    @app.post("/v1/asr")
    def asr(request: AudioRequest):
        def handler():
            samples, rate = decode_wav_payload(request.audio)
            return {"text": str(backend.asr(samples, rate))}

        return run("asr", handler)

    @app.post("/v1/embed/speech")
    def embed_speech(request: AudioRequest):
        def handler():
            samples, rate = decode_wav_payload(request.audio)
            vector = np.asarray(backend.embed_speech(samples, rate))
            _require(vector.shape == (SPEECH_DIM,), "embed_speech",
                     f"backend produced shape {vector.shape}")
            _require(bool(np.all(np.isfinite(vector))), "embed_speech",
                     "non-finite embedding")
            return {"vector": vector.tolist()}

        return run("embed_speech", handler)

    @app.post("/v1/embed/text")
    def embed_text(request: TextRequest):
        def handler():
            tokens, pooled, valid_len = backend.encode_text(request.text)
            tokens = np.asarray(tokens)
            pooled = np.asarray(pooled)
            _require(tokens.shape == (TEXT_TOKENS, TEXT_DIM), "embed_text",
                     f"token matrix shape {tokens.shape}")
            _require(pooled.shape == (TEXT_DIM,), "embed_text",
                     f"pooled shape {pooled.shape}")
            _require(0 <= valid_len <= TEXT_TOKENS, "embed_text",
                     f"valid_len {valid_len} out of range")
            return {
                "tokens": tokens.tolist(),
                "pooled": pooled.tolist(),
                "valid_len": int(valid_len),
            }

        return run("embed_text", handler)

    @app.post("/v1/embed/sentence")
    def embed_sentence(request: TextRequest):
        def handler():
            if not request.text.strip():
                raise ValueError("text must be non-empty")
            vector = np.asarray(backend.embed_sentence(request.text))
            _require(vector.shape == (SENTENCE_DIM,), "embed_sentence",
                     f"backend produced shape {vector.shape}")
            return {"vector": vector.tolist()}

        return run("embed_sentence", handler)

    @app.post("/v1/generate")
    def generate(request: GenerateRequest):
        def handler():
            if not 0.0 < request.top_p <= 1.0:
                raise ValueError(f"top_p must be in (0, 1], got {request.top_p}")
            if request.temperature < 0.0:
                raise ValueError(
                    f"temperature must be >= 0, got {request.temperature}")
            text = backend.generate(request.prompt, request.temperature,
                                    request.top_p, request.max_tokens)
            return {"text": str(text)}

        return run("generate", handler)

    @app.exception_handler(RequestValidationError)
    async def invalid_request(request: Request, exc: RequestValidationError):
        # malformed bodies still answer with the {error, stage} contract
        stage = request.url.path.rsplit("/", 1)[-1] or "request"
        return JSONResponse(status_code=400,
                            content={"error": str(exc.errors()), "stage": stage})

    @app.exception_handler(Exception)
    async def unhandled(request: Request, exc: Exception):  # pragma: no cover
        return JSONResponse(status_code=500,
                            content={"error": str(exc), "stage": "internal"})

    return app
