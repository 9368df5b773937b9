"""Corpus chunking: blank-line paragraphs split into individual sentences.

Sentences are the indexed retrieval unit; paragraph provenance is kept on
each chunk for citation display.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

# Terminator run followed by whitespace ends a sentence, unless the text
# just before it is a known abbreviation.
_BOUNDARY = re.compile(r"([.?!]+)(\s+)")
_PARAGRAPH = re.compile(r"\n\s*\n")

ABBREVIATIONS = (
    "et al.", "e.g.", "i.e.", "etc.", "cf.", "vs.", "fig.", "figs.",
    "dr.", "mr.", "mrs.", "ms.", "st.", "no.", "vol.", "approx.", "ca.",
)


@dataclass(frozen=True)
class Chunk:
    id: int
    doc_id: str
    paragraph_idx: int
    sentence_idx: int
    text: str


def _ends_with_abbreviation(prefix: str) -> bool:
    lowered = prefix.lower()
    return any(lowered.endswith(abbr) for abbr in ABBREVIATIONS)


def split_sentences(paragraph: str) -> list[str]:
    """Split on [.?!]+ followed by whitespace, honoring abbreviations."""
    sentences = []
    start = 0
    for match in _BOUNDARY.finditer(paragraph):
        end = match.end(1)
        if _ends_with_abbreviation(paragraph[start:end]):
            continue
        sentences.append(paragraph[start:end])
        start = match.end()
    sentences.append(paragraph[start:])
    return [s for s in (re.sub(r"\s+", " ", s).strip() for s in sentences) if s]


def chunk_corpus(documents: list[tuple[str, str]]) -> list[Chunk]:
    """One chunk per sentence across all documents, ids in document order."""
    chunks: list[Chunk] = []
    next_id = 0
    for doc_id, text in documents:
        paragraph_idx = -1
        for paragraph in _PARAGRAPH.split(text):
            if not paragraph.strip():
                continue
            paragraph_idx += 1
            for sentence_idx, sentence in enumerate(split_sentences(paragraph)):
                chunks.append(Chunk(
                    id=next_id,
                    doc_id=doc_id,
                    paragraph_idx=paragraph_idx,
                    sentence_idx=sentence_idx,
                    text=sentence,
                ))
                next_id += 1
    return chunks


def read_corpus_dir(corpus_dir: str | Path) -> list[tuple[str, str]]:
    """Load every *.txt file (doc_id = file stem), sorted for determinism."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {corpus_dir}")
    docs = [
        (path.stem, path.read_text(encoding="utf-8"))
        for path in sorted(corpus_dir.glob("*.txt"))
    ]
    if not docs:
        raise FileNotFoundError(f"no .txt documents in {corpus_dir}")
    return docs
