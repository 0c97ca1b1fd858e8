from __future__ import annotations

import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oak import (MISS, BenchmarkReport, HashedBagOfWordsProvider, PropertyGraph, RetrievalCase,
                 VectorIndex, embed_text, generate_animal_benchmark, generate_defect_benchmark,
                 generate_movie_benchmark, parse_catalog, run_retrieval_benchmark,
                 top_n_accuracy)
from oak.bench import (ANIMAL_COUNT, DEFECT_COUNT, FOCUS_DEFECTS, MOVIE_COUNT, PERSON_COUNT)
from oak.errors import EmptyCases, EmptyIndex


# --- top-n accuracy ----------------------------------------------------------


def test_top_n_fixture_values():
    ranks = [1, 4, 12]
    assert top_n_accuracy(ranks, 1) == pytest.approx(1 / 3)
    assert top_n_accuracy(ranks, 5) == pytest.approx(2 / 3)
    assert top_n_accuracy(ranks, 12) == 1.0
    assert top_n_accuracy(ranks, 3) == pytest.approx(1 / 3)
    assert top_n_accuracy(ranks, 4) == pytest.approx(2 / 3)
    assert top_n_accuracy(ranks, 11) == pytest.approx(2 / 3)


def test_miss_never_counts():
    assert top_n_accuracy([1, MISS, 2], 5) == pytest.approx(2 / 3)
    assert top_n_accuracy([MISS, MISS], 1000) == 0.0


def test_top_n_errors():
    with pytest.raises(EmptyCases):
        top_n_accuracy([], 1)
    with pytest.raises(ValueError):
        top_n_accuracy([1], 0)
    with pytest.raises(ValueError):
        top_n_accuracy([1], -3)


@given(st.lists(st.one_of(st.none(), st.integers(1, 50)), min_size=1, max_size=40),
       st.integers(1, 30), st.integers(0, 30))
def test_property_monotone_in_n(ranks, n, delta):
    assert top_n_accuracy(ranks, n) <= top_n_accuracy(ranks, n + delta)
    assert 0.0 <= top_n_accuracy(ranks, n) <= 1.0


def test_monotonicity_over_random_rank_lists():
    rng = random.Random("topn-mono-unit")
    for _ in range(200):
        ranks = [rng.choice([None] + list(range(1, 40)))
                 for _ in range(rng.randint(1, 60))]
        values = [top_n_accuracy(ranks, n) for n in range(1, 45)]
        assert values == sorted(values)
        assert values[-1] == sum(1 for r in ranks if r is not None) / len(ranks)


# --- report -------------------------------------------------------------------


def test_report_shape_and_json():
    report = BenchmarkReport(dataset_name="unit", provider_name="p", case_count=2,
                             top_n={5: 0.5, 1: 0.0}, ranks=[3, MISS])
    d = report.to_dict()
    assert d == {"dataset_name": "unit", "provider_name": "p", "case_count": 2,
                 "top_n": {"1": 0.0, "5": 0.5}, "ranks": [3, None]}
    assert json.loads(report.to_json()) == d
    table = report.to_table()
    assert "dataset: unit" in table and "  1   0.0000" in table and "  5   0.5000" in table


# --- the runner -----------------------------------------------------------------


def test_runner_on_handmade_fixture(provider):
    graph = PropertyGraph()
    index = VectorIndex(graph)
    texts = {"n:red": "a crimson red apple", "n:blue": "a deep blue ocean wave",
             "n:green": "a green forest canopy"}
    from oak import NodeKind
    for node_id, text in texts.items():
        graph.upsert_node(node_id, NodeKind.GENERIC)
        index.index_context(node_id, text, provider)
    graph.upsert_node("n:silent", NodeKind.GENERIC)  # no contexts -> MISS

    cases = [RetrievalCase("crimson red apple", "n:red"),
             RetrievalCase("blue ocean", "n:blue"),
             RetrievalCase("green forest", "n:green"),
             RetrievalCase("anything at all", "n:silent")]
    report = run_retrieval_benchmark(index, provider, cases, ns=[1, 3], dataset_name="hand")
    assert report.ranks[:3] == [1, 1, 1]
    assert report.ranks[3] is MISS
    assert report.top_n == {1: 0.75, 3: 0.75}
    assert report.case_count == 4 and report.provider_name == provider.name

    # rank agrees with a direct scan of the brute-force ranking
    ranking = index.brute_force_rank(embed_text(provider, "blue ocean"))
    expected = next(i for i, hit in enumerate(ranking, start=1) if hit.node_id == "n:blue")
    assert report.ranks[1] == expected


def test_runner_empty_index(provider, graph):
    index = VectorIndex(graph)
    with pytest.raises(EmptyIndex):
        run_retrieval_benchmark(index, provider, [RetrievalCase("q", "n")], ns=[1])


# --- movie benchmark ------------------------------------------------------------


def test_movie_shape():
    bench = generate_movie_benchmark(seed=0)
    movies = [n for n in bench.nodes if n["props"].get("type") == "movie"]
    people = [n for n in bench.nodes if n["props"].get("type") == "person"]
    assert len(movies) == MOVIE_COUNT == 38
    assert len(people) == PERSON_COUNT == 133
    assert len({n["id"] for n in bench.nodes}) == len(bench.nodes)
    assert len(bench.contexts) == MOVIE_COUNT
    assert len(bench.cases) == 2 * MOVIE_COUNT

    # every person appears in at least one acted_in/directed edge
    connected = {src for src, rel, _ in bench.edges if rel in ("acted_in", "directed")}
    assert connected == {n["id"] for n in people}
    # edges reference declared nodes only
    ids = {n["id"] for n in bench.nodes}
    assert all(src in ids and dst in ids for src, _, dst in bench.edges)


def test_movie_determinism_and_seed_sensitivity():
    assert generate_movie_benchmark(7).to_json() == generate_movie_benchmark(7).to_json()
    assert generate_movie_benchmark(7).to_json() != generate_movie_benchmark(8).to_json()


def test_movie_installs_and_retrieves(provider):
    graph = PropertyGraph()
    index = VectorIndex(graph)
    bench = generate_movie_benchmark(seed=0)
    bench.install(graph, index, provider)
    assert graph.node_count == MOVIE_COUNT + PERSON_COUNT
    assert len(index) == MOVIE_COUNT
    report = run_retrieval_benchmark(index, provider, bench.cases, ns=[1, 5, 10])
    assert report.top_n[1] <= report.top_n[5] <= report.top_n[10]
    assert report.top_n[10] > 0.5  # titles are unique; retrieval must mostly work
    again = run_retrieval_benchmark(index, provider, bench.cases, ns=[1, 5, 10])
    assert report.to_json() == again.to_json()


# --- animal benchmark ----------------------------------------------------------


def test_animal_shape_and_trait_subset():
    bench = generate_animal_benchmark(seed=0)
    assert len(bench.contexts) == ANIMAL_COUNT == 50
    assert len(bench.cases) == ANIMAL_COUNT
    assert len({n["id"] for n in bench.nodes}) == ANIMAL_COUNT
    context_by_node = dict(bench.contexts)
    for case in bench.cases:
        truth_context = context_by_node[case.truth_node_id]
        # the query is assembled from traits of the truth animal
        for phrase in ("a ", " animal with ", " living in "):
            assert phrase in case.query
        body = case.query.removeprefix("a ")
        size = body.split(" animal with ")[0]
        rest = body.split(" animal with ")[1]
        feature, habitat = rest.split(" living in ")
        assert f"is a {size} animal" in truth_context
        assert f"It has {feature} " in truth_context
        assert f"lives in {habitat}." in truth_context


def test_animal_determinism():
    assert generate_animal_benchmark(3).to_json() == generate_animal_benchmark(3).to_json()
    assert generate_animal_benchmark(3).to_json() != generate_animal_benchmark(4).to_json()


# --- defect benchmark -----------------------------------------------------------


def test_defect_shape():
    bench = generate_defect_benchmark(seed=0)
    defects = bench.catalog["defects"]
    assert len(defects) == DEFECT_COUNT == 28
    assert len(bench.cases) == 88
    assert len(bench.focus_defects) == FOCUS_DEFECTS == 5
    assert len(set(bench.focus_defects)) == FOCUS_DEFECTS
    assert len(bench.images) == 2 * DEFECT_COUNT
    for entry in defects:
        assert len(entry["descriptions"]) == 3
        assert len(entry["images"]) == 2
        assert len(entry["rules"]) == 3
        assert entry["measurement_instruction"]
    assert {c.truth_node_id for c in bench.cases} == set(bench.focus_defects)
    # the catalog parses cleanly
    entries = parse_catalog(bench.catalog)
    assert [e.defect_id for e in entries] == [d["id"] for d in defects]


def test_defect_determinism_and_materialize(tmp_path):
    a, b = generate_defect_benchmark(5), generate_defect_benchmark(5)
    assert a.to_json() == b.to_json()
    assert a.to_json() != generate_defect_benchmark(6).to_json()

    catalog_path = a.materialize(tmp_path / "cat")
    assert catalog_path.name == "catalog.json"
    assert json.loads(catalog_path.read_text()) == a.catalog
    for rel, data in a.images.items():
        assert (tmp_path / "cat" / rel).read_bytes() == data


def test_defect_queries_reuse_truth_traits():
    bench = generate_defect_benchmark(seed=0)
    descriptions = {d["id"]: " ".join(d["descriptions"]).lower()
                    for d in bench.catalog["defects"]}
    for case in bench.cases:
        truth_text = descriptions[case.truth_node_id]
        # the (color, shape, location) triple embedded in the query also appears
        # in the truth defect's own descriptions, making the case answerable
        tokens = set(case.query.split())
        overlap = [t for t in tokens if len(t) > 3 and t in truth_text]
        assert len(overlap) >= 3
