"""Provider interface for the five pretrained-model boundaries.

Implementations must be referentially transparent per input (the fixture
provider guarantees it by construction; the HTTP sidecar is expected to
run deterministic inference) and interchangeable at every call site.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np

from ..dsp.audio import AudioClip
from .text import TranscriptText

SPEECH_DIM = 768
TEXT_DIM = 768
TEXT_TOKENS = 512
SENTENCE_DIM = 384


class ProviderError(Exception):
    """Base class for provider failures."""


class TransportError(ProviderError):
    """The backing service could not be reached or returned an error."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


class GenerationTimeout(TransportError):
    pass


class FixtureMissError(ProviderError):
    """The fixture store has no entry for the requested recording."""


@dataclass
class TextEncoding:
    """Token-level matrix (TEXT_TOKENS x TEXT_DIM) plus pooled vector.

    Rows at and beyond ``valid_len`` are zero padding; ``pooled`` is the
    mean of the valid rows (zero vector for an empty transcript).
    """

    tokens: np.ndarray
    pooled: np.ndarray
    valid_len: int

    def __post_init__(self) -> None:
        self.tokens = np.asarray(self.tokens, dtype=np.float64)
        self.pooled = np.asarray(self.pooled, dtype=np.float64)
        if self.tokens.shape != (TEXT_TOKENS, TEXT_DIM):
            raise ValueError(
                f"token matrix must be {TEXT_TOKENS}x{TEXT_DIM}, got {self.tokens.shape}"
            )
        if self.pooled.shape != (TEXT_DIM,):
            raise ValueError(f"pooled vector must have {TEXT_DIM} dims")
        if not 0 <= self.valid_len <= TEXT_TOKENS:
            raise ValueError(f"valid_len out of range: {self.valid_len}")


def check_generation_params(temperature: float, top_p: float) -> None:
    if not 0.0 < top_p <= 1.0:
        raise ValueError(f"top_p must be in (0, 1], got {top_p}")
    if temperature < 0.0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")


def pooled_from_tokens(tokens: np.ndarray, valid_len: int) -> np.ndarray:
    if valid_len == 0:
        return np.zeros(TEXT_DIM)
    return tokens[:valid_len].mean(axis=0)


class Providers(abc.ABC):
    """The five model-backed operations used by the pipeline."""

    @abc.abstractmethod
    def transcribe(self, clip: AudioClip) -> TranscriptText: ...

    @abc.abstractmethod
    def embed_speech(self, clip: AudioClip) -> np.ndarray: ...

    @abc.abstractmethod
    def encode_text(self, transcript: TranscriptText) -> TextEncoding: ...

    @abc.abstractmethod
    def embed_sentence(self, text: str) -> np.ndarray: ...

    @abc.abstractmethod
    def generate(
        self, prompt: str, temperature: float, top_p: float, max_tokens: int = 256
    ) -> str: ...
