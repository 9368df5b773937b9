"""Deterministic content-hash seeded vectors for the offline fixture providers.

Algorithm (frozen so fixtures reproduce across processes and platforms):
64-bit FNV-1a over the content bytes seeds a 64-bit linear congruential
generator (Knuth constants); each state's top 53 bits map to [-1, 1).
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
    prime = _FNV_PRIME
    mask = _MASK64
    for b in data:
        h = ((h ^ b) * prime) & mask
    return h


def seeded_uniform(seed: int, n: int) -> np.ndarray:
    """n floats in [-1, 1) from the LCG stream started at ``seed``."""
    out = np.empty(n)
    x = seed & _MASK64
    mult, inc, mask = _LCG_MULT, _LCG_INC, _MASK64
    for i in range(n):
        x = (x * mult + inc) & mask
        out[i] = (x >> 11) / 4503599627370496.0 - 1.0  # 2^52
    return out


def content_vector(tag: str, payload: bytes, n: int) -> np.ndarray:
    """Deterministic pseudo-random vector for a namespaced content blob."""
    return seeded_uniform(fnv1a_64(tag.encode("utf-8") + b":" + payload), n)
