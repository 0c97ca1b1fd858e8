"""Turning raw documents and the defect catalog into graph content.

Triplet extraction sits behind a provider interface. The default is a
deterministic pattern grammar: sentences split on [.!?], one triplet per
sentence of the form "<subject> <connector> <object>" where the
connector is one of {is a, is an, belongs to, originates from, has,
causes}. Neural extractors (REBEL-class models) plug in as providers,
optionally over the remote HTTP client. Rule-based extraction keeps CI
deterministic; extraction quality is not the point of this module.

Catalog ingestion wires everything together: defect, category, machine
and image nodes with their ontology edges, per-description contexts in
the vector index, image files in the media store, and conformity rules
in the rule book. All ingestion paths are idempotent.
"""

from __future__ import annotations

import json
import mimetypes
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol

from .embedding import EmbeddingProvider
from .errors import AllStopTokens, EmptyText, InvalidRule, ParseError
from .graph import NodeKind, PropertyGraph, Provenance, Triplet, normalize_relation
from .index import VectorIndex
from .media import MediaStore, content_hash
from .workflow import ConformityRule, RuleAction, RuleBook, RuleOp

# Longest connectors first so the alternation prefers "is an" over "is a"
# and earliest-in-sentence wins across connectors.
_CONNECTOR = re.compile(r"\b(originates from|belongs to|is an|is a|causes|has)\b")
_SENTENCE_END = re.compile(r"[.!?]")
_ARTICLES = {"the", "a", "an"}


class ExtractorProvider(Protocol):
    name: str

    def extract(self, text: str) -> list[Triplet]: ...


def _strip_articles(phrase: str) -> str:
    words = phrase.split()
    while words and words[0] in _ARTICLES:
        words.pop(0)
    while words and words[-1] in _ARTICLES:
        words.pop()
    return " ".join(words)


def _sentence_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    pos = 0
    for match in _SENTENCE_END.finditer(text):
        if text[pos:match.start()].strip():
            spans.append((pos, match.end()))
        pos = match.end()
    if text[pos:].strip():
        spans.append((pos, len(text)))
    return spans


class PatternExtractor:
    """Deterministic "<subject> <connector> <object>" grammar."""

    name = "pattern"

    def extract(self, text: str) -> list[Triplet]:
        triplets = []
        for start, end in _sentence_spans(text):
            sentence = text[start:end].lower().strip(" .!?\n\t")
            match = _CONNECTOR.search(sentence)
            if match is None:
                continue
            subject = _strip_articles(match.string[:match.start()].strip())
            obj = _strip_articles(match.string[match.end():].strip())
            if not subject or not obj:
                continue
            triplets.append(Triplet(
                subject=subject,
                relation=normalize_relation(match.group(1)),
                object=obj,
                provenance=Provenance(doc=None, start=start, end=end),
            ))
        return triplets


def extract_triplets(provider: ExtractorProvider, text: str) -> list[Triplet]:
    return provider.extract(text)


@dataclass
class IngestReport:
    nodes_created: int = 0
    edges_created: int = 0
    contexts_indexed: int = 0
    media_stored: int = 0
    triplets_extracted: int = 0
    warnings: list[str] = field(default_factory=list)
    # extracted triplets kept for provenance inspection; not part of the counts
    extracted: list[Triplet] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "nodes_created": self.nodes_created,
            "edges_created": self.edges_created,
            "contexts_indexed": self.contexts_indexed,
            "media_stored": self.media_stored,
            "triplets_extracted": self.triplets_extracted,
            "warnings": list(self.warnings),
        }


@dataclass
class DefectCatalogEntry:
    defect_id: str
    name: str
    category: str
    machines: list[str]
    descriptions: list[str]
    image_paths: list[str]
    measurement_instruction: str
    rules: list[ConformityRule]


def _parse_rules(defect_id: str, raw_rules: list) -> list[ConformityRule]:
    rules = []
    for raw in raw_rules:
        try:
            rules.append(ConformityRule(
                rule_id=f"{defect_id}:{raw['priority']}",
                defect_id=defect_id,
                metric=raw["metric"],
                op=RuleOp(raw["op"]),
                threshold=raw["threshold"],
                action=RuleAction(raw["action"]),
                priority=int(raw["priority"]),
            ))
        except (KeyError, TypeError, ValueError, InvalidRule) as exc:
            raise ParseError(f"defect {defect_id!r} has a malformed rule: {exc}") from exc
    return rules


def parse_catalog(doc: dict) -> list[DefectCatalogEntry]:
    if not isinstance(doc, dict) or not isinstance(doc.get("defects"), list):
        raise ParseError("catalog must be a JSON object with a 'defects' list")
    entries = []
    seen_ids = set()
    for i, raw in enumerate(doc["defects"]):
        if not isinstance(raw, dict):
            raise ParseError(f"defects[{i}] is not an object")
        try:
            entry = DefectCatalogEntry(
                defect_id=raw["id"],
                name=raw["name"],
                category=raw["category"],
                machines=list(raw.get("machines", [])),
                descriptions=list(raw["descriptions"]),
                image_paths=list(raw.get("images", [])),
                measurement_instruction=raw.get("measurement_instruction", ""),
                rules=_parse_rules(raw.get("id", f"defects[{i}]"),
                                   list(raw.get("rules", []))),
            )
        except KeyError as exc:
            raise ParseError(f"defects[{i}] is missing field {exc}") from exc
        if not entry.defect_id:
            raise ParseError(f"defects[{i}] has an empty id")
        if entry.defect_id in seen_ids:
            raise ParseError(f"duplicate defect id {entry.defect_id!r}")
        if not entry.descriptions:
            raise ParseError(f"defect {entry.defect_id!r} has no descriptions")
        seen_ids.add(entry.defect_id)
        entries.append(entry)
    return entries


class KnowledgePipeline:
    """Ingestion facade over the graph, media store, index and rule book."""

    def __init__(self, graph: PropertyGraph, media: MediaStore, index: VectorIndex,
                 rules: RuleBook, embedder: EmbeddingProvider,
                 extractor: Optional[ExtractorProvider] = None) -> None:
        self.graph = graph
        self.media = media
        self.index = index
        self.rules = rules
        self.embedder = embedder
        self.extractor = extractor or PatternExtractor()

    # --- counted upserts ---------------------------------------------------

    def _upsert_node(self, report: IngestReport, node_id: str, kind: NodeKind,
                     props: Optional[dict] = None):
        created = not self.graph.has_node(node_id)
        node = self.graph.upsert_node(node_id, kind, props)
        if created:
            report.nodes_created += 1
        return node

    def _add_edge(self, report: IngestReport, src: str, rel: str, dst: str) -> None:
        created = not self.graph.has_edge(src, rel, dst)
        self.graph.add_edge(src, rel, dst)
        if created:
            report.edges_created += 1

    def _index_context(self, report: IngestReport, node_id: str, text: str) -> None:
        if self.index.has_context(node_id, text):
            return
        try:
            self.index.index_context(node_id, text, self.embedder)
            report.contexts_indexed += 1
        except (EmptyText, AllStopTokens) as exc:
            report.warnings.append(f"context on {node_id!r} not indexed: {exc}")

    def _insert_triplet(self, report: IngestReport, triplet: Triplet) -> None:
        nodes_before = self.graph.node_count
        edges_before = self.graph.edge_count
        self.graph.insert_triplet(triplet)
        report.nodes_created += self.graph.node_count - nodes_before
        report.edges_created += self.graph.edge_count - edges_before
        report.extracted.append(triplet)

    # --- document ingestion --------------------------------------------------

    def ingest_document(self, doc_bytes: bytes, mime: str) -> IngestReport:
        report = IngestReport()
        already_stored = self.media.contains(content_hash(doc_bytes))
        media_id = self.media.put_media(doc_bytes, mime)
        if not already_stored:
            report.media_stored += 1
        base_mime = mime.split(";")[0].strip().lower()
        if base_mime != "text/plain":
            report.warnings.append(
                f"media type {base_mime!r} stored but not extracted (only text/plain is)")
            return report
        text = doc_bytes.decode("utf-8", errors="replace")
        doc_node_id = f"doc:{media_id}"
        for para_start, para_end in _paragraph_spans(text):
            paragraph = text[para_start:para_end]
            triplets = self.extractor.extract(paragraph)
            rebased = [self._rebase(t, media_id, para_start, para_end) for t in triplets]
            for triplet in rebased:
                self._insert_triplet(report, triplet)
            report.triplets_extracted += len(rebased)
            if rebased:
                context_node = self.graph.get_node(rebased[0].subject.strip()).id
            else:
                context_node = self._upsert_node(report, doc_node_id, NodeKind.GENERIC,
                                                 {"mime": base_mime}).id
            self._index_context(report, context_node, paragraph)
        return report

    @staticmethod
    def _rebase(triplet: Triplet, media_id: str, para_start: int, para_end: int) -> Triplet:
        prov = triplet.provenance
        if prov is None:
            prov = Provenance(doc=media_id, start=para_start, end=para_end)
        else:
            prov = Provenance(doc=media_id, start=para_start + prov.start,
                              end=para_start + prov.end)
        return Triplet(triplet.subject, triplet.relation, triplet.object, prov)

    # --- catalog ingestion -----------------------------------------------------

    def load_catalog(self, catalog_path: Path | str) -> IngestReport:
        catalog_path = Path(catalog_path)
        try:
            doc = json.loads(catalog_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot parse catalog {catalog_path}: {exc}") from exc
        return self.load_catalog_doc(doc, base_dir=catalog_path.parent)

    def load_catalog_doc(self, doc: dict, base_dir: Path | str = ".") -> IngestReport:
        entries = parse_catalog(doc)
        base_dir = Path(base_dir)
        report = IngestReport()
        for entry in entries:
            # Read every image up front: an unreadable path skips the whole
            # entry, and nothing may be half-written when that happens.
            images: list[tuple[str, str, bytes]] = []  # (path name, mime, bytes)
            missing = None
            for image_path in entry.image_paths:
                path = base_dir / image_path
                try:
                    data = path.read_bytes()
                except OSError:
                    missing = image_path
                    break
                mime = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
                images.append((path.name, mime, data))
            if missing is not None:
                report.warnings.append(f"missing image file {missing!r}; "
                                       f"defect {entry.defect_id!r} skipped")
                continue

            props = {"name": entry.name}
            if entry.measurement_instruction:
                props["measurement_instruction"] = entry.measurement_instruction
            self._upsert_node(report, entry.defect_id, NodeKind.DEFECT, props)
            self._upsert_node(report, entry.category, NodeKind.CATEGORY,
                              {"name": entry.category})
            self._add_edge(report, entry.defect_id, "belongs_to", entry.category)
            for machine in entry.machines:
                self._upsert_node(report, machine, NodeKind.MACHINE, {"name": machine})
                self._add_edge(report, entry.defect_id, "originates_from", machine)
            for description in entry.descriptions:
                self._index_context(report, entry.defect_id, description)
            for filename, mime, data in images:
                stored_before = self.media.contains(content_hash(data))
                media_id = self.media.put_media(data, mime)
                if not stored_before:
                    report.media_stored += 1
                self._upsert_node(report, media_id, NodeKind.IMAGE,
                                  {"filename": filename})
                self._add_edge(report, entry.defect_id, "has_image", media_id)
            for rule in entry.rules:
                self.rules.register(rule)
        return report


def _paragraph_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    pos = 0
    for match in re.finditer(r"\n\s*\n", text):
        if text[pos:match.start()].strip():
            spans.append((pos, match.start()))
        pos = match.end()
    if text[pos:].strip():
        spans.append((pos, len(text)))
    return spans
