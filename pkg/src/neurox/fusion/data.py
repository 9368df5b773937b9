"""In-memory sample container for training and evaluation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LABEL_POSITIVE = "ad"
LABEL_NEGATIVE = "cn"
LABELS = (LABEL_NEGATIVE, LABEL_POSITIVE)


def label_to_int(label: str) -> int:
    if label not in LABELS:
        raise ValueError(f"unknown label {label!r}; expected one of {LABELS}")
    return int(label == LABEL_POSITIVE)


@dataclass
class FusionSample:
    """One recording: standardized acoustic vector, speech embedding,
    text token matrix with its valid length, and an optional 0/1 label
    (1 = the positive 'ad' class)."""

    sample_id: str
    acoustic: np.ndarray
    speech: np.ndarray
    text_tokens: np.ndarray
    text_valid_len: int
    label: int | None = None

    def require_label(self) -> int:
        if self.label is None:
            raise ValueError(f"sample {self.sample_id!r} has no label")
        return self.label
