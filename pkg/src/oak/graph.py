"""In-process property graph for the defect knowledge base.

Nodes are typed (Defect, Category, Machine, Image, Description, Generic)
and carry a scalar property bag plus an optional operator-rating
aggregate. Edges are unique (src, rel, dst) triples. Free-text triplets
land as Generic nodes so noisy extraction output never corrupts the
curated ontology; an ontology check reports edges between typed nodes
that fall outside the allowed schema.

Deletion is deliberately unsupported: the store is a knowledge archive.

Concurrency: single writer, many readers. All mutations serialize on an
internal lock; read operations take the same lock just long enough to
copy out a consistent view.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Optional

from .errors import EmptyField, EmptyId, KindConflict, MissingEndpoint, UnknownNode

Scalar = Any  # str | int | float | bool


class NodeKind(str, Enum):
    DEFECT = "Defect"
    CATEGORY = "Category"
    MACHINE = "Machine"
    IMAGE = "Image"
    DESCRIPTION = "Description"
    GENERIC = "Generic"


class Direction(str, Enum):
    OUT = "Out"
    IN = "In"
    BOTH = "Both"


@dataclass
class Rating:
    """Aggregate operator rating: mean on the 1-5 scale plus vote count."""

    mean: float
    count: int


@dataclass
class GraphNode:
    id: str
    kind: NodeKind
    props: dict[str, Scalar] = field(default_factory=dict)
    rating: Optional[Rating] = None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"id": self.id, "kind": self.kind.value, "props": dict(self.props)}
        if self.rating is not None:
            d["rating"] = {"mean": self.rating.mean, "count": self.rating.count}
        return d


@dataclass(frozen=True)
class GraphEdge:
    src: str
    rel: str
    dst: str

    def to_dict(self) -> dict[str, str]:
        return {"src": self.src, "rel": self.rel, "dst": self.dst}


@dataclass(frozen=True)
class Provenance:
    """Where a triplet came from: source document id plus char span."""

    doc: Optional[str]
    start: int
    end: int


def normalize_relation(rel: str) -> str:
    """Lowercase and collapse internal whitespace to single underscores."""
    return re.sub(r"\s+", "_", rel.strip().lower())


@dataclass(frozen=True)
class Triplet:
    subject: str
    relation: str
    object: str
    provenance: Optional[Provenance] = None

    def validate(self) -> "Triplet":
        if not self.subject.strip() or not self.relation.strip() or not self.object.strip():
            raise EmptyField(f"triplet has an empty field: {self!r}")
        return self


@dataclass(frozen=True)
class OntologySchema:
    """Set of allowed (src_kind, rel, dst_kind) edge shapes."""

    allowed: frozenset[tuple[NodeKind, str, NodeKind]]

    @classmethod
    def default(cls) -> "OntologySchema":
        return cls(frozenset({
            (NodeKind.DEFECT, "belongs_to", NodeKind.CATEGORY),
            (NodeKind.DEFECT, "originates_from", NodeKind.MACHINE),
            (NodeKind.DEFECT, "has_image", NodeKind.IMAGE),
            (NodeKind.DEFECT, "has_description", NodeKind.DESCRIPTION),
        }))


@dataclass(frozen=True)
class Violation:
    src: str
    rel: str
    dst: str
    reason: str


class PropertyGraph:
    """Mutable in-memory graph with idempotent inserts."""

    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._nodes: dict[str, GraphNode] = {}
        self._edges: dict[tuple[str, str, str], GraphEdge] = {}
        self._out: dict[str, list[GraphEdge]] = {}
        self._in: dict[str, list[GraphEdge]] = {}

    # --- node / edge counts ----------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def has_edge(self, src: str, rel: str, dst: str) -> bool:
        return (src, rel, dst) in self._edges

    def get_node(self, node_id: str) -> GraphNode:
        with self._lock:
            node = self._nodes.get(node_id)
            if node is None:
                raise UnknownNode(node_id)
            return node

    def nodes(self) -> list[GraphNode]:
        with self._lock:
            return list(self._nodes.values())

    def edges(self) -> list[GraphEdge]:
        with self._lock:
            return list(self._edges.values())

    # --- mutations ---------------------------------------------------------

    def upsert_node(self, node_id: str, kind: NodeKind, props: Optional[dict[str, Scalar]] = None) -> GraphNode:
        if not node_id:
            raise EmptyId("node id must be nonempty")
        kind = NodeKind(kind)
        with self._lock:
            node = self._nodes.get(node_id)
            if node is None:
                node = GraphNode(id=node_id, kind=kind, props=dict(props or {}))
                self._nodes[node_id] = node
            else:
                if node.kind is not kind:
                    raise KindConflict(f"node {node_id!r} exists with kind {node.kind.value}, not {kind.value}")
                if props:
                    node.props.update(props)
            return node

    def add_edge(self, src: str, rel: str, dst: str) -> GraphEdge:
        with self._lock:
            if src not in self._nodes or dst not in self._nodes:
                raise MissingEndpoint(f"edge ({src!r}, {rel!r}, {dst!r}) references a missing node")
            key = (src, rel, dst)
            edge = self._edges.get(key)
            if edge is None:
                edge = GraphEdge(src, rel, dst)
                self._edges[key] = edge
                self._out.setdefault(src, []).append(edge)
                self._in.setdefault(dst, []).append(edge)
            return edge

    def insert_triplet(self, triplet: Triplet) -> tuple[GraphNode, GraphEdge, GraphNode]:
        """Upsert subject/object as Generic nodes (exact-id match reuses any
        existing node regardless of kind) and add the normalized edge."""
        triplet.validate()
        subject = triplet.subject.strip()
        obj = triplet.object.strip()
        rel = normalize_relation(triplet.relation)
        with self._lock:
            subj_node = self._nodes.get(subject) or self.upsert_node(subject, NodeKind.GENERIC)
            obj_node = self._nodes.get(obj) or self.upsert_node(obj, NodeKind.GENERIC)
            edge = self.add_edge(subj_node.id, rel, obj_node.id)
            return subj_node, edge, obj_node

    # --- reads -------------------------------------------------------------

    def neighbors(self, node_id: str, rel_filter: Optional[str] = None,
                  direction: Direction = Direction.OUT) -> list[GraphNode]:
        direction = Direction(direction)
        with self._lock:
            if node_id not in self._nodes:
                raise UnknownNode(node_id)
            found: dict[str, GraphNode] = {}
            if direction in (Direction.OUT, Direction.BOTH):
                for edge in self._out.get(node_id, []):
                    if rel_filter is None or edge.rel == rel_filter:
                        found[edge.dst] = self._nodes[edge.dst]
            if direction in (Direction.IN, Direction.BOTH):
                for edge in self._in.get(node_id, []):
                    if rel_filter is None or edge.rel == rel_filter:
                        found[edge.src] = self._nodes[edge.src]
            return [found[k] for k in sorted(found)]

    def validate_ontology(self, schema: Optional[OntologySchema] = None) -> list[Violation]:
        """Report edges between typed nodes that fall outside the schema.

        Edges touching a Generic node are exempt: open-world triplets are
        allowed to say anything until curated.
        """
        schema = schema or OntologySchema.default()
        violations = []
        with self._lock:
            for edge in self._edges.values():
                src_kind = self._nodes[edge.src].kind
                dst_kind = self._nodes[edge.dst].kind
                if NodeKind.GENERIC in (src_kind, dst_kind):
                    continue
                if (src_kind, edge.rel, dst_kind) not in schema.allowed:
                    violations.append(Violation(
                        edge.src, edge.rel, edge.dst,
                        f"({src_kind.value}, {edge.rel}, {dst_kind.value}) not in schema"))
        return violations

    def check_referential_integrity(self) -> None:
        with self._lock:
            for (src, _, dst) in self._edges:
                assert src in self._nodes and dst in self._nodes

    # --- snapshot ------------------------------------------------------------

    def to_snapshot(self) -> str:
        """One JSON document {nodes, edges} with stable key ordering."""
        with self._lock:
            doc = {
            "nodes": [self._nodes[k].to_dict() for k in sorted(self._nodes)],
            "edges": [self._edges[k].to_dict() for k in sorted(self._edges)],
            }
        return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_snapshot(cls, text: str) -> "PropertyGraph":
        doc = json.loads(text)
        graph = cls()
        for nd in doc["nodes"]:
            node = graph.upsert_node(nd["id"], NodeKind(nd["kind"]), nd.get("props") or {})
            rating = nd.get("rating")
            if rating is not None:
                node.rating = Rating(mean=rating["mean"], count=rating["count"])
        for ed in doc["edges"]:
            graph.add_edge(ed["src"], ed["rel"], ed["dst"])
        return graph


def ensure_nodes_exist(graph: PropertyGraph, ids: Iterable[str]) -> None:
    for node_id in ids:
        if not graph.has_node(node_id):
            raise UnknownNode(node_id)
