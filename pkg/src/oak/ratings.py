"""Operator ratings over knowledge entries.

One vote per (node, operator); re-rating replaces the previous vote.
The aggregate (mean on the 1-5 scale plus count) is written back onto
the graph node so retrieval can boost well-rated entries.
"""

from __future__ import annotations

import threading

from .errors import ScoreOutOfRange, UnknownNode
from .graph import PropertyGraph, Rating


class RatingBook:
    def __init__(self, graph: PropertyGraph) -> None:
        self._graph = graph
        self._lock = threading.RLock()
        self._votes: dict[str, dict[str, int]] = {}

    def rate_entry(self, node_id: str, operator_id: str, score: int) -> Rating:
        if not self._graph.has_node(node_id):
            raise UnknownNode(node_id)
        if isinstance(score, bool) or not isinstance(score, int) or not 1 <= score <= 5:
            raise ScoreOutOfRange(f"score must be an integer in [1, 5], got {score!r}")
        with self._lock:
            votes = self._votes.setdefault(node_id, {})
            votes[operator_id] = score
            return self._recompute(node_id)

    def _recompute(self, node_id: str) -> Rating:
        votes = self._votes.get(node_id, {})
        rating = Rating(mean=sum(votes.values()) / len(votes), count=len(votes))
        self._graph.get_node(node_id).rating = rating
        return rating

    def aggregate_for(self, node_id: str) -> Rating | None:
        node = self._graph.get_node(node_id)
        return node.rating

    def to_dict(self) -> dict[str, dict[str, int]]:
        with self._lock:
            return {node: dict(votes) for node, votes in sorted(self._votes.items())}

    @classmethod
    def from_dict(cls, graph: PropertyGraph, data: dict[str, dict[str, int]]) -> "RatingBook":
        book = cls(graph)
        for node_id, votes in data.items():
            book._votes[node_id] = dict(votes)
            if votes:
                book._recompute(node_id)
        return book
