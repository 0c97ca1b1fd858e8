"""Exact vector index over text contexts linked to graph nodes.

Retrieval is a brute-force cosine scan: every stored vector is
L2-normalized on insert, queries are normalized once, and the score is
a plain dot product computed by the scan kernel (compiled when
available, pure Python otherwise; both are bit-identical). Exactness
over speed is deliberate: the catalog scale is dozens to thousands of
contexts, and an exact scan keeps the ranking a pure function of index
content.

query_top_k(k) is by construction the length-k prefix of
brute_force_rank; the latter is exported as the test and benchmark
oracle. Ties break by ascending context id (insertion order).

An optional rating boost folds operator feedback into the score:
score = cosine + rating_weight * (mean - 3) / 2 for rated nodes, which
maps the 1..5 scale onto [-1, 1] and leaves unrated nodes untouched.
"""

from __future__ import annotations

import heapq
import json
import threading
from array import array
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO

from ._kernels import BACKEND, dot_block
from .embedding import EmbeddingProvider, EmbeddingVector, embed_text
from .errors import DimMismatch, EmptyIndex, EmptyText, UnknownNode
from .graph import PropertyGraph

__all__ = ["VectorIndex", "SearchHit", "BACKEND"]


@dataclass(frozen=True)
class IndexedContext:
    context_id: int
    node_id: str
    text: str
    vector: EmbeddingVector


@dataclass(frozen=True)
class SearchHit:
    context_id: int
    node_id: str
    score: float


class VectorIndex:
    def __init__(self, graph: PropertyGraph) -> None:
        self._graph = graph
        self._lock = threading.RLock()
        self._contexts: list[IndexedContext] = []
        self._flat = array("d")  # row-major normalized vectors
        self._dim: Optional[int] = None
        self._provider_name: Optional[str] = None
        self._next_id = 1
        self._seen: set[tuple[str, str]] = set()  # (node_id, text) pairs

    @property
    def dim(self) -> Optional[int]:
        return self._dim

    @property
    def provider_name(self) -> Optional[str]:
        return self._provider_name

    def __len__(self) -> int:
        return len(self._contexts)

    def contexts(self) -> list[IndexedContext]:
        with self._lock:
            return list(self._contexts)

    def contexts_for_node(self, node_id: str) -> list[IndexedContext]:
        with self._lock:
            return [c for c in self._contexts if c.node_id == node_id]

    def has_context(self, node_id: str, text: str) -> bool:
        with self._lock:
            return (node_id, text) in self._seen

    # --- inserts -----------------------------------------------------------

    def index_context(self, node_id: str, text: str, provider: EmbeddingProvider) -> int:
        if not text.strip():
            raise EmptyText("context text must be nonempty")
        if not self._graph.has_node(node_id):
            raise UnknownNode(node_id)
        vector = embed_text(provider, text)
        with self._lock:
            if self._dim is None:
                self._dim = vector.dim
                self._provider_name = provider.name
            elif vector.dim != self._dim:
                raise DimMismatch(f"index dim {self._dim}, provider {provider.name} dim {vector.dim}")
            return self._append(node_id, text, vector)

    def _append(self, node_id: str, text: str, vector: EmbeddingVector) -> int:
        context_id = self._next_id
        self._next_id += 1
        self._contexts.append(IndexedContext(context_id, node_id, text, vector))
        self._flat.extend(vector.normalized().values)
        self._seen.add((node_id, text))
        return context_id

    # --- scoring ------------------------------------------------------------

    def _boost_for(self, node_id: str, rating_weight: float, cache: dict[str, float]) -> float:
        boost = cache.get(node_id)
        if boost is None:
            node = self._graph.get_node(node_id)
            boost = 0.0
            if node.rating is not None and node.rating.count > 0:
                boost = rating_weight * ((node.rating.mean - 3.0) / 2.0)
            cache[node_id] = boost
        return boost

    def _scores(self, query_vec: EmbeddingVector, rating_weight: float) -> array:
        """Cosine (clamped) plus rating boost for every context, by position."""
        if query_vec.dim != self._dim:
            raise DimMismatch(f"query dim {query_vec.dim}, index dim {self._dim}")
        n = len(self._contexts)
        out = array("d", bytes(8 * n))
        dot_block(query_vec.normalized().values_array(), self._flat, self._dim, out)
        cache: dict[str, float] = {}
        for i in range(n):
            score = max(-1.0, min(1.0, out[i]))
            if rating_weight != 0.0:
                score += self._boost_for(self._contexts[i].node_id, rating_weight, cache)
            out[i] = score
        return out

    def query_top_k(self, query_text: str, k: int, provider: EmbeddingProvider,
                    rating_weight: float = 0.0) -> list[SearchHit]:
        if not query_text.strip():
            raise EmptyText("query text must be nonempty")
        if k <= 0:
            return []
        query_vec = embed_text(provider, query_text)
        with self._lock:
            if not self._contexts:
                return []
            scores = self._scores(query_vec, rating_weight)
            picked = heapq.nsmallest(
                k, range(len(self._contexts)),
                key=lambda i: (-scores[i], self._contexts[i].context_id))
            return [SearchHit(self._contexts[i].context_id, self._contexts[i].node_id, scores[i])
                    for i in picked]

    def brute_force_rank(self, query_vec: EmbeddingVector,
                         rating_weight: float = 0.0) -> list[SearchHit]:
        """Score and sort every context; the oracle the top-k path must prefix."""
        with self._lock:
            if not self._contexts:
                raise EmptyIndex("index holds no contexts")
            scores = self._scores(query_vec, rating_weight)
            order = sorted(range(len(self._contexts)),
                           key=lambda i: (-scores[i], self._contexts[i].context_id))
            return [SearchHit(self._contexts[i].context_id, self._contexts[i].node_id, scores[i])
                    for i in order]

    # --- snapshot -----------------------------------------------------------

    def write_snapshot(self, fp: TextIO) -> None:
        """Header line {dim, count, provider_name}, then one context per line."""
        with self._lock:
            header = {"dim": self._dim, "count": len(self._contexts),
                      "provider_name": self._provider_name}
            fp.write(json.dumps(header, sort_keys=True) + "\n")
            for ctx in self._contexts:
                fp.write(json.dumps(
                    {"context_id": ctx.context_id, "node_id": ctx.node_id,
                     "text": ctx.text, "values": list(ctx.vector.values)},
                    sort_keys=True, ensure_ascii=False) + "\n")

    @classmethod
    def read_snapshot(cls, fp: Iterable[str], graph: PropertyGraph) -> "VectorIndex":
        index = cls(graph)
        lines = iter(fp)
        header = json.loads(next(lines))
        index._dim = header["dim"]
        index._provider_name = header["provider_name"]
        for line in lines:
            if not line.strip():
                continue
            doc = json.loads(line)
            vector = EmbeddingVector(tuple(doc["values"]))
            ctx = IndexedContext(doc["context_id"], doc["node_id"], doc["text"], vector)
            index._contexts.append(ctx)
            index._flat.extend(vector.normalized().values)
            index._seen.add((ctx.node_id, ctx.text))
            index._next_id = max(index._next_id, ctx.context_id + 1)
        return index
