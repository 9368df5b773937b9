"""Structured query rendering for the explanation generator.

The rendered text always carries four blocks in this order: predicted
class with probability, the strongest standardized acoustic features,
a one-line speech-embedding note, and the transcript excerpt.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dsp.features import FEATURE_NAMES, N_FEATURES
from ..fusion.forward import Prediction

TOP_FEATURES = 8
EXCERPT_LIMIT = 1200


@dataclass
class ExplanationQuery:
    predicted_class: str
    probability: float
    acoustic_summary: list[tuple[str, float]]
    speech_note: str
    transcript_excerpt: str

    def render(self) -> str:
        feature_lines = "\n".join(
            f"- {name}: {value:.2f}" for name, value in self.acoustic_summary
        )
        return (
            f"predicted class: {self.predicted_class.upper()} "
            f"(p={self.probability:.2f})\n"
            f"strongest standardized acoustic features:\n{feature_lines}\n"
            f"speech embedding: {self.speech_note}\n"
            f"transcript excerpt: {self.transcript_excerpt}"
        )


def truncate_at_word(text: str, limit: int = EXCERPT_LIMIT) -> str:
    if len(text) <= limit:
        return text
    cut = text.rfind(" ", 0, limit + 1)
    if cut <= 0:
        return text[:limit]
    return text[:cut]


def speech_note(speech_embedding: np.ndarray) -> str:
    return (
        f"{len(speech_embedding)}-dim pooled vector, "
        f"norm={float(np.linalg.norm(speech_embedding)):.2f}, "
        f"mean={float(np.mean(speech_embedding)):+.3f}"
    )


def build_query(
    prediction: Prediction,
    standardized_features: np.ndarray,
    transcript: str,
    note: str,
) -> ExplanationQuery:
    """Top-|z| features (schema order breaks ties) plus the other blocks."""
    values = np.asarray(standardized_features, dtype=np.float64)
    if values.shape != (N_FEATURES,):
        raise ValueError(f"expected {N_FEATURES} standardized features")
    # stable sort on -|z| keeps schema order among equal magnitudes
    order = np.argsort(-np.abs(values), kind="stable")[:TOP_FEATURES]
    summary = [(FEATURE_NAMES[i], float(values[i])) for i in order]
    return ExplanationQuery(
        predicted_class=prediction.label,
        probability=prediction.probability,
        acoustic_summary=summary,
        speech_note=note,
        transcript_excerpt=truncate_at_word(transcript),
    )
