"""Deterministic hash-seeded vectors for the stub backend.

Same frozen construction the offline client fixtures use: 64-bit FNV-1a
over the content seeds a 64-bit LCG whose top 53 bits map to [-1, 1).
"""

from __future__ import annotations

import numpy as np

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF
_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return h


def seeded_uniform(seed: int, n: int) -> np.ndarray:
    out = np.empty(n)
    x = seed & _MASK64
    for i in range(n):
        x = (x * _LCG_MULT + _LCG_INC) & _MASK64
        out[i] = (x >> 11) / 4503599627370496.0 - 1.0
    return out


def content_vector(tag: str, payload: bytes, n: int) -> np.ndarray:
    return seeded_uniform(fnv1a_64(tag.encode("utf-8") + b":" + payload), n)
