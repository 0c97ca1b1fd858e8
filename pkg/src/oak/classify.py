"""Image-classification provider interface plus evaluation metrics.

The real CNN (a fine-tuned deep model) stays out of process; anything
satisfying ClassifierProvider plugs in. The built-in stand-in is a
nearest-centroid classifier over 8-bin intensity histograms of the raw
image bytes: deterministic, dependency-free, and good enough to exercise
the image-search channel end to end. Distances map to probabilities via
softmax over negative distances; any monotone map preserves the ranking,
which is what retrieval consumes.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Protocol

from .errors import EmptyImage, EmptyMatrix, NoExemplars, UnknownLabel

HISTOGRAM_BINS = 8


class ClassifierProvider(Protocol):
    name: str

    @property
    def labels(self) -> list[str]: ...

    def classify(self, data: bytes) -> list[tuple[str, float]]: ...


def intensity_histogram(data: bytes) -> list[float]:
    """8-bin histogram of byte intensities, normalized to frequencies.

    Raw bytes are treated as 8-bit grayscale samples; no decoding is
    attempted, so the provider accepts any byte payload.
    """
    if not data:
        raise EmptyImage("image bytes must be nonempty")
    counts = [0] * HISTOGRAM_BINS
    for byte in data:
        counts[byte >> 5] += 1
    total = len(data)
    return [c / total for c in counts]


class HistogramCentroidClassifier:
    """Nearest-centroid over intensity histograms of registered exemplars."""

    name = "histogram-centroid"

    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._sums: dict[str, list[float]] = {}
        self._counts: dict[str, int] = {}

    @property
    def labels(self) -> list[str]:
        with self._lock:
            return sorted(self._sums)

    def register_exemplar(self, label: str, data: bytes) -> None:
        hist = intensity_histogram(data)
        with self._lock:
            if label not in self._sums:
                self._sums[label] = [0.0] * HISTOGRAM_BINS
                self._counts[label] = 0
            acc = self._sums[label]
            for i, v in enumerate(hist):
                acc[i] += v
            self._counts[label] += 1

    def _centroids(self) -> dict[str, list[float]]:
        return {label: [v / self._counts[label] for v in acc]
                for label, acc in self._sums.items()}

    def classify(self, data: bytes) -> list[tuple[str, float]]:
        hist = intensity_histogram(data)
        with self._lock:
            if not self._sums:
                raise NoExemplars("no exemplar images registered")
            distances = {}
            for label, centroid in self._centroids().items():
                distances[label] = math.sqrt(sum((h - c) ** 2 for h, c in zip(hist, centroid)))
        # softmax over negative distances, temperature 1
        exps = {label: math.exp(-d) for label, d in distances.items()}
        total = sum(exps.values())
        scored = [(label, e / total) for label, e in exps.items()]
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return scored


def classify_image(provider: ClassifierProvider, data: bytes) -> list[tuple[str, float]]:
    if not data:
        raise EmptyImage("image bytes must be nonempty")
    ranked = provider.classify(data)
    return sorted(ranked, key=lambda pair: (-pair[1], pair[0]))


@dataclass
class ConfusionMatrix:
    labels: list[str]
    counts: list[list[int]]  # rows = truth, cols = prediction

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "matrix": [list(r) for r in self.counts]}


def confusion_matrix(pairs: list[tuple[str, str]], labels: list[str]) -> ConfusionMatrix:
    position = {label: i for i, label in enumerate(labels)}
    counts = [[0] * len(labels) for _ in labels]
    for truth, predicted in pairs:
        if truth not in position:
            raise UnknownLabel(truth)
        if predicted not in position:
            raise UnknownLabel(predicted)
        counts[position[truth]][position[predicted]] += 1
    return ConfusionMatrix(labels=list(labels), counts=counts)


def per_class_stats(m: ConfusionMatrix) -> dict[str, dict[str, float]]:
    """Precision, recall, F1 and support per class; 0 where undefined."""
    n = len(m.labels)
    stats = {}
    for i, label in enumerate(m.labels):
        true_pos = m.counts[i][i]
        col_sum = sum(m.counts[r][i] for r in range(n))
        row_sum = sum(m.counts[i])
        precision = true_pos / col_sum if col_sum else 0.0
        recall = true_pos / row_sum if row_sum else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        stats[label] = {"precision": precision, "recall": recall, "f1": f1,
                        "support": row_sum}
    return stats


def weighted_f1(m: ConfusionMatrix) -> float:
    """Support-weighted mean of per-class F1 scores."""
    if m.total == 0:
        raise EmptyMatrix("confusion matrix has no observations")
    stats = per_class_stats(m)
    weighted = sum(s["f1"] * s["support"] for s in stats.values())
    return weighted / m.total


def evaluation_report(m: ConfusionMatrix) -> dict:
    """JSON-ready evaluation summary: matrix, per-class stats, weighted F1."""
    return {
        "labels": list(m.labels),
        "matrix": [list(r) for r in m.counts],
        "per_class": per_class_stats(m),
        "weighted_f1": weighted_f1(m),
    }
