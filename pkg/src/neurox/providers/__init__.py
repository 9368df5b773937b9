"""Pretrained-model boundaries (fixture and HTTP) plus feature standardization."""

from .base import (
    SENTENCE_DIM,
    SPEECH_DIM,
    TEXT_DIM,
    TEXT_TOKENS,
    FixtureMissError,
    GenerationTimeout,
    ProviderError,
    Providers,
    TextEncoding,
    TransportError,
)
from .fixture import FixtureProviders
from .http import DEFAULT_SIDECAR_URL, SIDECAR_URL_ENV, HttpProviders, sidecar_url
from .scaler import Scaler, apply_scaler, fit_scaler
from .text import TranscriptText, preprocess_text

__all__ = [
    "SENTENCE_DIM",
    "SPEECH_DIM",
    "TEXT_DIM",
    "TEXT_TOKENS",
    "FixtureMissError",
    "GenerationTimeout",
    "ProviderError",
    "Providers",
    "TextEncoding",
    "TransportError",
    "FixtureProviders",
    "HttpProviders",
    "DEFAULT_SIDECAR_URL",
    "SIDECAR_URL_ENV",
    "sidecar_url",
    "Scaler",
    "apply_scaler",
    "fit_scaler",
    "TranscriptText",
    "preprocess_text",
]
