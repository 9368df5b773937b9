"""Exact flat vector index over 384-dim chunk embeddings.

Search scans every stored vector under squared L2 distance; there is no
approximation anywhere, so results always match an exhaustive oracle.
Ties break by ascending chunk id.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..providers.base import SENTENCE_DIM
from .chunking import Chunk

INDEX_MAGIC = b"NXINDX01"
INDEX_VERSION = 1


class IndexError_(ValueError):
    """Malformed index file or out-of-range search parameters."""


@dataclass(frozen=True)
class RetrievedContext:
    """Exactly k hits, ascending by (distance, chunk id)."""

    hits: list[tuple[Chunk, float]]

    @property
    def chunk_ids(self) -> list[int]:
        return [chunk.id for chunk, _ in self.hits]


@dataclass
class VectorIndex:
    """Immutable after construction: n aligned (vector, id, chunk) rows."""

    vectors: np.ndarray
    ids: np.ndarray
    chunks: dict[int, Chunk] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        self.ids = np.asarray(self.ids, dtype=np.int64)
        if self.vectors.ndim != 2 or self.vectors.shape[1] != SENTENCE_DIM:
            raise ValueError(f"vectors must be n x {SENTENCE_DIM}")
        if len(self.ids) != len(self.vectors):
            raise ValueError("ids misaligned with vector rows")
        if len(set(self.ids.tolist())) != len(self.ids):
            raise ValueError("chunk ids must be unique")
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("index vectors must be finite")
        missing = [i for i in self.ids.tolist() if i not in self.chunks]
        if missing:
            raise ValueError(f"no chunk metadata for ids {missing[:5]}")
        self.vectors.setflags(write=False)
        self.ids.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.ids)


def build_index(chunks: list[Chunk], embedder) -> VectorIndex:
    """Embed every chunk with the sentence provider and freeze the rows.

    Any embedding failure aborts the whole build; no partial index exists.
    """
    if not chunks:
        raise ValueError("cannot build an index over zero chunks")
    vectors = np.stack([embedder.embed_sentence(chunk.text) for chunk in chunks])
    ids = np.array([chunk.id for chunk in chunks], dtype=np.int64)
    return VectorIndex(vectors=vectors, ids=ids,
                       chunks={chunk.id: chunk for chunk in chunks})


def search(index: VectorIndex, query_vector: np.ndarray, k: int) -> RetrievedContext:
    """Exact k-nearest rows by squared L2; deterministic id tie-break."""
    query = np.asarray(query_vector, dtype=np.float64)
    if query.shape != (SENTENCE_DIM,):
        raise IndexError_(f"query must have {SENTENCE_DIM} dims, got {query.shape}")
    if not 1 <= k <= index.size:
        raise IndexError_(f"k={k} out of range [1, {index.size}]")
    diffs = index.vectors - query
    distances = np.einsum("ij,ij->i", diffs, diffs)
    order = np.lexsort((index.ids, distances))[:k]
    hits = [
        (index.chunks[int(index.ids[row])], float(distances[row])) for row in order
    ]
    return RetrievedContext(hits=hits)


def save_index(index: VectorIndex, index_path: str | Path,
               chunks_path: str | Path) -> None:
    """Index file: magic, JSON header, float64 rows, int64 ids, sha256.

    Chunk metadata travels in a sibling JSON file.
    """
    header = {
        "version": INDEX_VERSION,
        "dim": SENTENCE_DIM,
        "count": index.size,
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    blob = bytearray()
    blob += INDEX_MAGIC
    blob += struct.pack("<I", len(header_bytes))
    blob += header_bytes
    blob += np.ascontiguousarray(index.vectors, dtype="<f8").tobytes()
    blob += np.ascontiguousarray(index.ids, dtype="<i8").tobytes()
    blob += hashlib.sha256(bytes(blob)).digest()
    Path(index_path).write_bytes(bytes(blob))

    chunk_payload = [
        {
            "id": chunk.id,
            "doc_id": chunk.doc_id,
            "paragraph_idx": chunk.paragraph_idx,
            "sentence_idx": chunk.sentence_idx,
            "text": chunk.text,
        }
        for chunk in index.chunks.values()
    ]
    Path(chunks_path).write_text(
        json.dumps({"version": INDEX_VERSION, "chunks": chunk_payload},
                   sort_keys=True, ensure_ascii=False)
    )


def load_index(index_path: str | Path, chunks_path: str | Path) -> VectorIndex:
    raw = Path(index_path).read_bytes()
    if len(raw) < len(INDEX_MAGIC) + 4 + 32 or raw[: len(INDEX_MAGIC)] != INDEX_MAGIC:
        raise IndexError_(f"{index_path}: not an index file")
    payload, digest = raw[:-32], raw[-32:]
    if hashlib.sha256(payload).digest() != digest:
        raise IndexError_(f"{index_path}: checksum mismatch")
    offset = len(INDEX_MAGIC)
    (header_len,) = struct.unpack_from("<I", payload, offset)
    offset += 4
    header = json.loads(payload[offset : offset + header_len])
    offset += header_len
    if header.get("version") != INDEX_VERSION:
        raise IndexError_(f"{index_path}: unsupported version {header.get('version')!r}")
    count, dim = header["count"], header["dim"]
    if dim != SENTENCE_DIM:
        raise IndexError_(f"{index_path}: dim {dim}, expected {SENTENCE_DIM}")
    vec_bytes = count * dim * 8
    vectors = np.frombuffer(payload[offset : offset + vec_bytes], dtype="<f8")
    vectors = vectors.reshape(count, dim).copy()
    offset += vec_bytes
    ids = np.frombuffer(payload[offset : offset + count * 8], dtype="<i8").copy()

    chunk_doc = json.loads(Path(chunks_path).read_text())
    chunks = {
        entry["id"]: Chunk(
            id=entry["id"],
            doc_id=entry["doc_id"],
            paragraph_idx=entry["paragraph_idx"],
            sentence_idx=entry["sentence_idx"],
            text=entry["text"],
        )
        for entry in chunk_doc["chunks"]
    }
    return VectorIndex(vectors=vectors, ids=ids, chunks=chunks)
