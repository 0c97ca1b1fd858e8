from __future__ import annotations

import math
import random
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oak import (ConfusionMatrix, HistogramCentroidClassifier, classify_image,
                 confusion_matrix, evaluation_report, intensity_histogram, per_class_stats,
                 weighted_f1)
from oak.errors import EmptyImage, EmptyMatrix, NoExemplars, UnknownLabel


# --- histogram ---------------------------------------------------------------


def test_histogram_bins_by_intensity():
    # one byte per bin: bin index is the top three bits
    data = bytes([0, 32, 64, 96, 128, 160, 192, 224])
    assert intensity_histogram(data) == [0.125] * 8


def test_histogram_is_a_frequency_vector():
    data = bytes([0, 0, 0, 255])
    hist = intensity_histogram(data)
    assert hist[0] == 0.75 and hist[7] == 0.25
    assert sum(hist) == pytest.approx(1.0)


def test_histogram_empty_image():
    with pytest.raises(EmptyImage):
        intensity_histogram(b"")


def test_histogram_oracle_against_direct_count():
    rng = random.Random("hist-unit")
    data = bytes(rng.randrange(256) for _ in range(4096))
    hist = intensity_histogram(data)
    for bin_index in range(8):
        expected = sum(1 for b in data if b >> 5 == bin_index) / len(data)
        assert hist[bin_index] == pytest.approx(expected, abs=1e-15)


# --- nearest-centroid classifier ------------------------------------------------


def blob(center, length=256):
    clamped = max(0, min(255, center))
    return bytes([clamped]) * length


def test_classifier_prefers_own_exemplar():
    clf = HistogramCentroidClassifier()
    clf.register_exemplar("dark", blob(10))
    clf.register_exemplar("bright", blob(250))
    ranked = clf.classify(blob(15))
    assert ranked[0][0] == "dark"
    ranked = clf.classify(blob(240))
    assert ranked[0][0] == "bright"


def test_probabilities_sum_to_one():
    clf = HistogramCentroidClassifier()
    for i, label in enumerate(["a", "b", "c", "d"]):
        clf.register_exemplar(label, blob(i * 60 + 10))
    ranked = clf.classify(blob(100))
    assert sum(p for _, p in ranked) == pytest.approx(1.0, abs=1e-6)
    assert all(0.0 < p < 1.0 for _, p in ranked)
    assert [p for _, p in ranked] == sorted((p for _, p in ranked), reverse=True)


def test_labels_sorted_and_scores_deterministic():
    clf = HistogramCentroidClassifier()
    clf.register_exemplar("zeta", blob(30))
    clf.register_exemplar("alpha", blob(200))
    assert clf.labels == ["alpha", "zeta"]
    assert clf.classify(blob(90)) == clf.classify(blob(90))


def test_equidistant_tie_breaks_by_label():
    clf = HistogramCentroidClassifier()
    clf.register_exemplar("b", blob(32))   # bin 1
    clf.register_exemplar("a", blob(224))  # bin 7
    ranked = clf.classify(blob(128))       # bin 4: equidistant histograms
    assert [label for label, _ in ranked] == ["a", "b"]
    assert ranked[0][1] == pytest.approx(ranked[1][1], abs=1e-12)


def test_multiple_exemplars_average_into_centroid():
    clf = HistogramCentroidClassifier()
    clf.register_exemplar("mixed", bytes([0]) * 100)
    clf.register_exemplar("mixed", bytes([255]) * 100)
    clf.register_exemplar("dark", bytes([0]) * 100)
    # query mostly dark: pure-dark centroid is closer than the averaged one
    ranked = clf.classify(bytes([0]) * 90 + bytes([255]) * 10)
    assert ranked[0][0] == "dark"


def test_no_exemplars_and_empty_image():
    clf = HistogramCentroidClassifier()
    with pytest.raises(NoExemplars):
        clf.classify(blob(50))
    clf.register_exemplar("a", blob(50))
    with pytest.raises(EmptyImage):
        clf.classify(b"")
    with pytest.raises(EmptyImage):
        classify_image(clf, b"")


def test_classify_image_wrapper_orders_output():
    class Shuffled:
        name = "shuffled"
        labels = ["a", "b", "c"]

        def classify(self, data):
            return [("b", 0.2), ("c", 0.5), ("a", 0.3)]

    assert classify_image(Shuffled(), b"x") == [("c", 0.5), ("a", 0.3), ("b", 0.2)]


# --- confusion matrix and F1 ---------------------------------------------------


def test_confusion_matrix_from_hand_pairs():
    pairs = [("cat", "cat"), ("cat", "cat"), ("cat", "dog"),
             ("dog", "dog"), ("dog", "dog"), ("dog", "dog")]
    m = confusion_matrix(pairs, ["cat", "dog"])
    assert m.counts == [[2, 1], [0, 3]]
    assert m.total == 6


def test_unknown_label_rejected():
    with pytest.raises(UnknownLabel):
        confusion_matrix([("cat", "fish")], ["cat", "dog"])
    with pytest.raises(UnknownLabel):
        confusion_matrix([("fish", "cat")], ["cat", "dog"])


def test_weighted_f1_hand_value():
    # precision cat=1, recall cat=2/3 -> f1=0.8 (support 3)
    # precision dog=3/4, recall dog=1 -> f1=6/7 (support 3)
    m = ConfusionMatrix(labels=["cat", "dog"], counts=[[2, 1], [0, 3]])
    expected = (0.8 * 3 + (6 / 7) * 3) / 6
    assert weighted_f1(m) == pytest.approx(expected, abs=1e-12)
    assert weighted_f1(m) == pytest.approx(0.82857, abs=1e-4)


def test_perfect_diagonal_scores_one():
    m = ConfusionMatrix(labels=["a", "b", "c"], counts=[[5, 0, 0], [0, 2, 0], [0, 0, 9]])
    assert weighted_f1(m) == pytest.approx(1.0, abs=1e-15)


def test_empty_matrix_raises():
    m = ConfusionMatrix(labels=["a"], counts=[[0]])
    with pytest.raises(EmptyMatrix):
        weighted_f1(m)


def test_all_wrong_scores_zero():
    m = ConfusionMatrix(labels=["a", "b"], counts=[[0, 4], [4, 0]])
    assert weighted_f1(m) == 0.0


def test_per_class_stats_handles_absent_class():
    m = ConfusionMatrix(labels=["a", "b"], counts=[[3, 0], [0, 0]])
    stats = per_class_stats(m)
    assert stats["b"] == {"precision": 0.0, "recall": 0.0, "f1": 0.0, "support": 0}
    assert stats["a"]["f1"] == 1.0


def test_label_permutation_invariance():
    rng = random.Random("f1-perm-unit")
    labels = ["a", "b", "c"]
    pairs = [(rng.choice(labels), rng.choice(labels)) for _ in range(50)]
    baseline = weighted_f1(confusion_matrix(pairs, labels))
    for order in permutations(labels):
        value = weighted_f1(confusion_matrix(pairs, list(order)))
        assert value == pytest.approx(baseline, abs=1e-12)


def test_evaluation_report_shape():
    m = confusion_matrix([("a", "a"), ("a", "b"), ("b", "b")], ["a", "b"])
    report = evaluation_report(m)
    assert set(report) == {"labels", "matrix", "per_class", "weighted_f1"}
    assert report["matrix"] == [[1, 1], [0, 1]]
    assert report["weighted_f1"] == weighted_f1(m)


@given(st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from("abc")),
                min_size=1, max_size=60))
def test_property_f1_bounds_and_diagonal(pairs):
    labels = ["a", "b", "c"]
    m = confusion_matrix(pairs, labels)
    value = weighted_f1(m)
    assert 0.0 <= value <= 1.0
    if all(t == p for t, p in pairs):
        assert value == pytest.approx(1.0, abs=1e-15)


@given(st.binary(min_size=1, max_size=512))
def test_property_histogram_normalized(data):
    hist = intensity_histogram(data)
    assert len(hist) == 8
    assert math.fsum(hist) == pytest.approx(1.0, abs=1e-12)
    assert all(v >= 0.0 for v in hist)
