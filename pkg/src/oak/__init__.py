"""oak — operator assistance knowledge base.

A typed property graph with embedded text contexts, content-addressed
media, exact multimodal retrieval, a guided 5-step inspection workflow
with rule-based conformity suggestions, and a small evaluation harness.
All learned components sit behind provider interfaces with
deterministic in-process defaults.
"""

from ._kernels import BACKEND
from .bench import (MISS, BenchmarkReport, DefectBenchmark, GeneratedBenchmark,
                    RetrievalCase, generate_animal_benchmark,
                    generate_defect_benchmark, generate_movie_benchmark,
                    run_retrieval_benchmark, top_n_accuracy)
from .classify import (ConfusionMatrix, HistogramCentroidClassifier, classify_image,
                       confusion_matrix, evaluation_report, intensity_histogram,
                       per_class_stats, weighted_f1)
from .config import ProviderSelection, ServiceConfig
from .embedding import (EmbeddingVector, HashedBagOfWordsProvider, cosine_similarity,
                        embed_text, tokenize)
from .errors import OakError
from .extract import (DefectCatalogEntry, IngestReport, KnowledgePipeline, PatternExtractor,
                      extract_triplets, parse_catalog)
from .graph import (Direction, GraphEdge, GraphNode, NodeKind, OntologySchema, PropertyGraph,
                    Provenance, Rating, Triplet, normalize_relation)
from .index import SearchHit, VectorIndex
from .media import MediaStore, content_hash
from .ratings import RatingBook
from .service import OakService, SearchRequest, SearchResponse, SearchResult
from .workflow import (ConformityRule, Decision, InspectionSession, MeasurementRecord,
                       RuleAction, RuleBook, RuleOp, SessionState, Suggestion, WorkflowEngine)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BenchmarkReport",
    "ConformityRule",
    "ConfusionMatrix",
    "Decision",
    "DefectCatalogEntry",
    "Direction",
    "EmbeddingVector",
    "GraphEdge",
    "GraphNode",
    "HashedBagOfWordsProvider",
    "HistogramCentroidClassifier",
    "IngestReport",
    "InspectionSession",
    "KnowledgePipeline",
    "MeasurementRecord",
    "MediaStore",
    "NodeKind",
    "OakError",
    "OakService",
    "OntologySchema",
    "PatternExtractor",
    "PropertyGraph",
    "Provenance",
    "ProviderSelection",
    "Rating",
    "RatingBook",
    "RetrievalCase",
    "RuleAction",
    "RuleBook",
    "RuleOp",
    "SearchHit",
    "SearchRequest",
    "SearchResponse",
    "SearchResult",
    "ServiceConfig",
    "SessionState",
    "Suggestion",
    "Triplet",
    "VectorIndex",
    "WorkflowEngine",
    "classify_image",
    "confusion_matrix",
    "content_hash",
    "cosine_similarity",
    "embed_text",
    "evaluation_report",
    "extract_triplets",
    "generate_animal_benchmark",
    "generate_defect_benchmark",
    "generate_movie_benchmark",
    "intensity_histogram",
    "normalize_relation",
    "parse_catalog",
    "per_class_stats",
    "MISS",
    "DefectBenchmark",
    "GeneratedBenchmark",
    "run_retrieval_benchmark",
    "top_n_accuracy",
    "weighted_f1",
    "__version__",
]
