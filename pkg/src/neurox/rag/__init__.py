"""Literature retrieval and explanation generation over an exact L2 index."""

from .chunking import ABBREVIATIONS, Chunk, chunk_corpus, read_corpus_dir, split_sentences
from .explain import (
    DEFAULT_K,
    DEFAULT_TEMPERATURE,
    DEFAULT_TOP_P,
    Explanation,
    assemble_prompt,
    explain,
)
from .index import (
    IndexError_,
    RetrievedContext,
    VectorIndex,
    build_index,
    load_index,
    save_index,
    search,
)
from .query import ExplanationQuery, build_query, speech_note, truncate_at_word

__all__ = [
    "ABBREVIATIONS",
    "Chunk",
    "chunk_corpus",
    "read_corpus_dir",
    "split_sentences",
    "DEFAULT_K",
    "DEFAULT_TEMPERATURE",
    "DEFAULT_TOP_P",
    "Explanation",
    "assemble_prompt",
    "explain",
    "IndexError_",
    "RetrievedContext",
    "VectorIndex",
    "build_index",
    "load_index",
    "save_index",
    "search",
    "ExplanationQuery",
    "build_query",
    "speech_note",
    "truncate_at_word",
]
