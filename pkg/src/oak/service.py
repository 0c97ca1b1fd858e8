"""Main manager: composes every store into one service object with
multimodal search, snapshot persistence, and event-log recovery.

Search channels
---------------
* text  — query text (and/or audio transcript, merged with a space) is
  optionally rewritten, embedded, and ranked against all contexts; the
  per-context ranking collapses to per-node best rank.
* image — a previously uploaded image is classified; labels are defect
  node ids.

One active channel returns that channel's native ordering with its
native scores. Two channels merge by reciprocal rank fusion,
fused(d) = Σ_channels 1/(60 + rank_channel(d)), a scale-free merge for
incommensurable score types (cosine vs softmax). Ties break by
ascending node id.

Durability
----------
With a data_dir configured: media writes are durable immediately,
every workflow transition appends one JSON line to sessions.log, and
save_snapshot() writes graph/index/rules/ratings plus a hash manifest.
open() restores snapshot (if any) then replays the event log, so a
cold restart loses nothing that was acknowledged.
"""

from __future__ import annotations

import io
import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .bench import (BenchmarkReport, generate_animal_benchmark, generate_defect_benchmark,
                    generate_movie_benchmark, run_retrieval_benchmark)
from .classify import HistogramCentroidClassifier, classify_image
from .config import ServiceConfig
from .embedding import HashedBagOfWordsProvider, embed_text
from .errors import (CorruptSnapshot, EmptyIndex, NoModality, UnknownMedia, UnknownNode,
                     VersionMismatch)
from .extract import IngestReport, KnowledgePipeline, PatternExtractor
from .graph import NodeKind, PropertyGraph, Triplet
from .index import VectorIndex
from .media import MediaStore, content_hash
from .ratings import RatingBook
from .remote import (IdentityRewriteProvider, RemoteClassifierProvider, RemoteEmbeddingProvider,
                     RemoteExtractorProvider, RemoteRewriteProvider)
from .workflow import RuleBook, WorkflowEngine

SNAPSHOT_VERSION = 1
RRF_CONSTANT = 60
SNAPSHOT_FILES = ("graph.json", "index.jsonl", "rules.json", "ratings.json")


@dataclass
class SearchRequest:
    text: Optional[str] = None
    audio_transcript: Optional[str] = None
    image_media_id: Optional[str] = None
    k: int = 10
    rating_weight: float = 0.0

    def merged_text(self) -> str:
        return " ".join(part for part in (self.text, self.audio_transcript) if part)


@dataclass
class SearchResult:
    defect_id: str
    fused_score: float
    channels: dict[str, dict] = field(default_factory=dict)
    evidence: dict[str, list[str]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"defect_id": self.defect_id, "fused_score": self.fused_score,
                "channels": self.channels, "evidence": self.evidence}


@dataclass
class SearchResponse:
    results: list[SearchResult]
    degraded: bool  # a remote rewrite fell back to the raw query

    def to_dict(self) -> dict:
        return {"results": [r.to_dict() for r in self.results], "degraded": self.degraded}


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


class OakService:
    def __init__(self, config: Optional[ServiceConfig] = None) -> None:
        self.config = config or ServiceConfig()
        self.data_dir = Path(self.config.data_dir) if self.config.data_dir else None
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        self._log_lock = threading.Lock()

        self.graph = PropertyGraph()
        self.media = MediaStore(self.data_dir / "media" if self.data_dir else None)
        self.index = VectorIndex(self.graph)
        self.rules = RuleBook()
        self.ratings = RatingBook(self.graph)

        self.embedder = self._build_embedder()
        self.extractor = self._build_extractor()
        self.classifier = self._build_classifier()
        self.rewriter = self._build_rewriter()

        self._wire()

    # --- provider wiring ---------------------------------------------------

    def _build_embedder(self):
        sel = self.config.embedding
        if sel.kind == "remote":
            return RemoteEmbeddingProvider(sel.url)
        return HashedBagOfWordsProvider()

    def _build_extractor(self):
        sel = self.config.extractor
        if sel.kind == "remote":
            return RemoteExtractorProvider(sel.url)
        return PatternExtractor()

    def _build_classifier(self):
        sel = self.config.classifier
        if sel.kind == "remote":
            return RemoteClassifierProvider(sel.url)
        return HistogramCentroidClassifier()

    def _build_rewriter(self):
        sel = self.config.rewrite
        if sel.kind == "remote":
            return RemoteRewriteProvider(sel.url)
        return IdentityRewriteProvider()

    def _wire(self) -> None:
        """(Re)build the components that hold references to the stores."""
        self.engine = WorkflowEngine(self.graph, self.media, self.rules,
                                     event_sink=self._sink_event)
        self.pipeline = KnowledgePipeline(self.graph, self.media, self.index,
                                          self.rules, self.embedder, self.extractor)

    # --- event log -----------------------------------------------------------

    @property
    def event_log_path(self) -> Optional[Path]:
        return self.data_dir / "sessions.log" if self.data_dir else None

    def _sink_event(self, event: dict) -> None:
        path = self.event_log_path
        if path is None:
            return
        line = json.dumps(event, sort_keys=True, ensure_ascii=False)
        with self._log_lock, open(path, "a", encoding="utf-8") as fp:
            fp.write(line + "\n")

    def replay_event_log(self) -> int:
        path = self.event_log_path
        if path is None or not path.exists():
            return 0
        applied = 0
        with open(path, encoding="utf-8") as fp:
            for line in fp:
                line = line.strip()
                if not line:
                    continue
                self.engine.apply_event(json.loads(line))
                applied += 1
        return applied

    # --- lifecycle -----------------------------------------------------------

    @classmethod
    def open(cls, config: Optional[ServiceConfig] = None) -> "OakService":
        """Construct and restore: snapshot (when present) then event replay."""
        service = cls(config)
        if service.data_dir is not None:
            snapshot_dir = service.data_dir / "snapshot"
            if (snapshot_dir / "manifest.json").exists():
                service.load_snapshot(snapshot_dir)
            service.replay_event_log()
        return service

    def save_snapshot(self, directory: Optional[Path | str] = None) -> Path:
        if directory is None:
            if self.data_dir is None:
                raise ValueError("no data_dir configured and no directory given")
            directory = self.data_dir / "snapshot"
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)

        index_buf = io.StringIO()
        self.index.write_snapshot(index_buf)
        payloads = {
            "graph.json": self.graph.to_snapshot().encode("utf-8"),
            "index.jsonl": index_buf.getvalue().encode("utf-8"),
            "rules.json": json.dumps(self.rules.to_list(), sort_keys=True,
                                     ensure_ascii=False).encode("utf-8"),
            "ratings.json": json.dumps(self.ratings.to_dict(), sort_keys=True,
                                       ensure_ascii=False).encode("utf-8"),
        }
        for name, data in payloads.items():
            _atomic_write(directory / name, data)
        manifest = {
            "version": SNAPSHOT_VERSION,
            "files": {name: content_hash(data) for name, data in payloads.items()},
        }
        _atomic_write(directory / "manifest.json",
                      json.dumps(manifest, sort_keys=True).encode("utf-8"))
        return directory

    def load_snapshot(self, directory: Path | str) -> None:
        directory = Path(directory)
        if not (directory / "manifest.json").exists() \
                and (directory / "snapshot" / "manifest.json").exists():
            directory = directory / "snapshot"  # accept the data_dir itself
        manifest_path = directory / "manifest.json"
        if not manifest_path.exists():
            raise CorruptSnapshot(f"no manifest in {directory}")
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise CorruptSnapshot(f"unreadable manifest: {exc}") from exc
        version = manifest.get("version")
        if version != SNAPSHOT_VERSION:
            raise VersionMismatch(f"snapshot version {version!r}, supported {SNAPSHOT_VERSION}")
        files = manifest.get("files")
        if not isinstance(files, dict) or not set(SNAPSHOT_FILES) <= set(files):
            raise CorruptSnapshot("manifest does not list the full file set")

        blobs: dict[str, bytes] = {}
        for name, expected in files.items():
            path = directory / name
            if not path.exists():
                raise CorruptSnapshot(f"missing snapshot file {name}")
            data = path.read_bytes()
            if content_hash(data) != expected:
                raise CorruptSnapshot(f"hash mismatch for {name}")
            blobs[name] = data

        graph = PropertyGraph.from_snapshot(blobs["graph.json"].decode("utf-8"))
        index = VectorIndex.read_snapshot(
            io.StringIO(blobs["index.jsonl"].decode("utf-8")), graph)
        rules = RuleBook.from_list(json.loads(blobs["rules.json"].decode("utf-8")))
        ratings = RatingBook.from_dict(graph, json.loads(blobs["ratings.json"].decode("utf-8")))

        self.graph, self.index, self.rules, self.ratings = graph, index, rules, ratings
        self._wire()
        self.refresh_exemplars()

    # --- ingestion ---------------------------------------------------------------

    def ingest_catalog(self, path: Path | str) -> IngestReport:
        report = self.pipeline.load_catalog(path)
        self.refresh_exemplars()
        return report

    def ingest_catalog_doc(self, doc: dict, base_dir: Path | str) -> IngestReport:
        report = self.pipeline.load_catalog_doc(doc, Path(base_dir))
        self.refresh_exemplars()
        return report

    def ingest_document(self, data: bytes, mime: str) -> IngestReport:
        return self.pipeline.ingest_document(data, mime)

    def insert_triplet(self, triplet: Triplet):
        return self.graph.insert_triplet(triplet)

    def refresh_exemplars(self) -> int:
        """Rebuild the builtin classifier's centroids from catalog images.

        Labels are defect node ids; each defect's has_image neighbors are
        media digests resolved through the store. Remote classifiers manage
        their own models, so this is a no-op for them.
        """
        if not isinstance(self.classifier, HistogramCentroidClassifier):
            return 0
        classifier = HistogramCentroidClassifier()
        registered = 0
        for node in self.graph.nodes():
            if node.kind is not NodeKind.DEFECT:
                continue
            for image_node in self.graph.neighbors(node.id, rel_filter="has_image"):
                if not self.media.contains(image_node.id):
                    continue
                data, _ = self.media.get_media(image_node.id)
                classifier.register_exemplar(node.id, data)
                registered += 1
        self.classifier = classifier
        return registered

    # --- search --------------------------------------------------------------------

    def rewrite_query(self, text: str) -> tuple[str, bool]:
        return self.rewriter.rewrite(text)

    def _text_channel(self, query_text: str,
                      rating_weight: float) -> tuple[list[tuple[str, float]], dict[str, list[str]]]:
        """Per-node ranking (best context first) plus contributing texts."""
        try:
            ranking = self.index.brute_force_rank(
                embed_text(self.embedder, query_text), rating_weight=rating_weight)
        except EmptyIndex:
            return [], {}
        texts = {ctx.context_id: ctx.text for ctx in self.index.contexts()}
        collapsed: list[tuple[str, float]] = []
        contributing: dict[str, list[str]] = {}
        for hit in ranking:
            bucket = contributing.setdefault(hit.node_id, [])
            if not bucket:
                collapsed.append((hit.node_id, hit.score))
            if len(bucket) < 3:
                bucket.append(texts[hit.context_id])
        return collapsed, contributing

    def _image_channel(self, media_id: str) -> list[tuple[str, float]]:
        if not self.media.contains(media_id):
            raise UnknownMedia(media_id)
        data, _ = self.media.get_media(media_id)
        return classify_image(self.classifier, data)

    def _evidence_for(self, node_id: str, contributing: dict[str, list[str]]) -> dict[str, list[str]]:
        contexts = contributing.get(node_id)
        if contexts is None:
            contexts = [ctx.text for ctx in self.index.contexts_for_node(node_id)[:3]]
        image_ids: list[str] = []
        if self.graph.has_node(node_id):
            image_ids = [n.id for n in self.graph.neighbors(node_id, rel_filter="has_image")]
        return {"contexts": contexts, "image_media_ids": image_ids}

    def multimodal_search(self, req: SearchRequest) -> SearchResponse:
        query_text = req.merged_text()
        has_text = bool(query_text.strip())
        has_image = bool(req.image_media_id)
        if not has_text and not has_image:
            raise NoModality("request carries no text, transcript, or image")
        k = req.k if req.k else self.config.default_k

        degraded = False
        channels: dict[str, list[tuple[str, float]]] = {}
        contributing: dict[str, list[str]] = {}
        if has_text:
            rewritten, degraded = self.rewrite_query(query_text)
            channels["text"], contributing = self._text_channel(rewritten, req.rating_weight)
        if has_image:
            channels["image"] = self._image_channel(req.image_media_id)

        active = {name: ranking for name, ranking in channels.items() if ranking}
        results: list[SearchResult] = []
        if len(active) <= 1:
            for name, ranking in active.items():
                for position, (node_id, score) in enumerate(ranking, start=1):
                    results.append(SearchResult(
                        defect_id=node_id, fused_score=score,
                        channels={name: {"rank": position, "score": score}},
                        evidence=self._evidence_for(node_id, contributing)))
        else:
            breakdown: dict[str, dict[str, dict]] = {}
            for name, ranking in active.items():
                for position, (node_id, score) in enumerate(ranking, start=1):
                    breakdown.setdefault(node_id, {})[name] = {"rank": position, "score": score}
            fused = [(node_id,
                      sum(1.0 / (RRF_CONSTANT + info["rank"]) for info in per_channel.values()),
                      per_channel)
                     for node_id, per_channel in breakdown.items()]
            fused.sort(key=lambda item: (-item[1], item[0]))
            for node_id, fused_score, per_channel in fused:
                results.append(SearchResult(
                    defect_id=node_id, fused_score=fused_score, channels=per_channel,
                    evidence=self._evidence_for(node_id, contributing)))
        return SearchResponse(results=results[:k], degraded=degraded)

    # --- reads ------------------------------------------------------------------

    def defect_detail(self, node_id: str) -> dict:
        node = self.graph.get_node(node_id)  # raises UnknownNode
        out_edges: dict[str, list[str]] = {}
        in_edges: dict[str, list[str]] = {}
        for edge in self.graph.edges():
            if edge.src == node_id:
                out_edges.setdefault(edge.rel, []).append(edge.dst)
            if edge.dst == node_id:
                in_edges.setdefault(edge.rel, []).append(edge.src)
        for bucket in (out_edges, in_edges):
            for ids in bucket.values():
                ids.sort()
        return {
            "node": node.to_dict(),
            "neighbors_out": {rel: out_edges[rel] for rel in sorted(out_edges)},
            "neighbors_in": {rel: in_edges[rel] for rel in sorted(in_edges)},
            "contexts": [ctx.text for ctx in self.index.contexts_for_node(node_id)],
            "image_media_ids": out_edges.get("has_image", []),
            "rules": [rule.to_dict() for rule in self.rules.rules_for(node_id)],
        }

    def health(self) -> dict:
        return {
            "status": "ok",
            "counts": {
                "nodes": self.graph.node_count,
                "edges": self.graph.edge_count,
                "contexts": len(self.index),
                "media": len(self.media),
                "sessions": len(self.engine),
            },
        }

    # --- benchmarks -------------------------------------------------------------

    def run_benchmark(self, dataset: str, seed: int, ns: list[int]) -> BenchmarkReport:
        """Run a named benchmark in an isolated in-memory setup."""
        graph = PropertyGraph()
        index = VectorIndex(graph)
        provider = HashedBagOfWordsProvider()
        if dataset in ("movie", "animal"):
            bench = (generate_movie_benchmark(seed) if dataset == "movie"
                     else generate_animal_benchmark(seed))
            bench.install(graph, index, provider)
            cases = bench.cases
        elif dataset == "defect":
            bench = generate_defect_benchmark(seed)
            for defect in bench.catalog["defects"]:
                graph.upsert_node(defect["id"], NodeKind.DEFECT, {"name": defect["name"]})
                for text in defect["descriptions"]:
                    index.index_context(defect["id"], text, provider)
            cases = bench.cases
        else:
            raise ValueError(f"unknown dataset {dataset!r} (movie|animal|defect)")
        return run_retrieval_benchmark(index, provider, cases, ns, dataset_name=dataset)
