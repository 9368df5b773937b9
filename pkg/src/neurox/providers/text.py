"""Transcript normalization shared by every text-consuming stage."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_DISALLOWED = re.compile(r"[^a-z0-9 .,?']")
_REPEAT_PUNCT = re.compile(r"([.,?'])\1+")
_MULTI_SPACE = re.compile(r" {2,}")


def preprocess_text(raw: str) -> str:
    """Lowercase, strip characters outside [a-z0-9 .,?'], normalize spacing.

    Idempotent and never longer than the input.  Whitespace of any kind
    collapses to single spaces; repeated punctuation collapses to one mark.
    """
    text = raw.lower()
    text = re.sub(r"\s", " ", text)
    text = _DISALLOWED.sub("", text)
    text = _REPEAT_PUNCT.sub(r"\1", text)
    text = _MULTI_SPACE.sub(" ", text)
    return text.strip()


@dataclass
class TranscriptText:
    """Raw provider output plus its normalized form."""

    raw: str
    normalized: str = field(default="")
    clip_id: str | None = None

    def __post_init__(self) -> None:
        if not self.normalized:
            self.normalized = preprocess_text(self.raw)

    @property
    def words(self) -> list[str]:
        return self.normalized.split()
