"""Text embedding providers and cosine similarity.

Real sentence-embedding models stay outside this codebase; anything that
satisfies EmbeddingProvider (deterministic text -> fixed-dim vector) can
be plugged in, including an out-of-process model behind the remote
provider client. The built-in default is a 256-dim hashed bag-of-words:
fully deterministic, dependency-free, and similar texts land on nearby
vectors, which is all the retrieval plumbing needs for testing.
"""

from __future__ import annotations

import math
import re
from array import array
from dataclasses import dataclass
from typing import Protocol

from .errors import AllStopTokens, DimMismatch, EmptyText, NonFiniteVector, ZeroVector

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)

_FNV_OFFSET = 2166136261
_FNV_PRIME = 16777619


def fnv1a_32(data: bytes) -> int:
    """32-bit FNV-1a hash."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFF
    return h


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in self.values):
            raise NonFiniteVector("vector contains non-finite values")
        if not any(v != 0.0 for v in self.values):
            raise ZeroVector("all-zero vectors are rejected")

    @property
    def dim(self) -> int:
        return len(self.values)

    def norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.values))

    def normalized(self) -> "EmbeddingVector":
        n = self.norm()
        return EmbeddingVector(tuple(v / n for v in self.values))

    def values_array(self) -> array:
        """Contiguous double buffer for the scan kernel."""
        return array("d", self.values)


class EmbeddingProvider(Protocol):
    name: str
    dim: int

    def embed(self, text: str) -> EmbeddingVector: ...


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs (unicode-aware)."""
    return _TOKEN.findall(text.lower())


class HashedBagOfWordsProvider:
    """Default provider: FNV-1a hashed token counts, L2-normalized.

    Each token hashes into one of `dim` buckets; bucket counts form the
    raw vector. Word order is irrelevant and repeated tokens cancel out
    under normalization, e.g. "stain stain" == "stain".
    """

    def __init__(self, dim: int = 256, name: str = "hashed-bow-256") -> None:
        self.dim = dim
        self.name = name

    def embed(self, text: str) -> EmbeddingVector:
        if not text.strip():
            raise EmptyText("cannot embed empty text")
        tokens = tokenize(text)
        if not tokens:
            raise AllStopTokens(f"no token survives tokenization of {text!r}")
        counts = [0.0] * self.dim
        for token in tokens:
            counts[fnv1a_32(token.encode("utf-8")) % self.dim] += 1.0
        return EmbeddingVector(tuple(counts)).normalized()


def embed_text(provider: EmbeddingProvider, text: str) -> EmbeddingVector:
    vec = provider.embed(text)
    if vec.dim != provider.dim:
        raise DimMismatch(f"provider {provider.name} declared dim {provider.dim}, produced {vec.dim}")
    return vec


def cosine_similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """dot(a, b) / (|a| |b|), clamped to [-1, 1] against rounding."""
    if a.dim != b.dim:
        raise DimMismatch(f"dims differ: {a.dim} vs {b.dim}")
    dot = 0.0
    for x, y in zip(a.values, b.values):
        dot += x * y
    value = dot / (a.norm() * b.norm())
    return max(-1.0, min(1.0, value))
