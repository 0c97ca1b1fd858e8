from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from oak import OakService, ServiceConfig, generate_defect_benchmark
from oak.api import create_app


@pytest.fixture
def client(tmp_path):
    service = OakService(ServiceConfig(data_dir=tmp_path / "data"))
    catalog = generate_defect_benchmark(0).materialize(tmp_path / "catalog")
    service.ingest_catalog(catalog)
    return TestClient(create_app(service))


@pytest.fixture
def bare_client():
    return TestClient(create_app(OakService(ServiceConfig())))


# --- media ---------------------------------------------------------------------


def test_media_round_trip(bare_client):
    posted = bare_client.post("/media", content=b"image-bytes",
                              headers={"Content-Type": "image/png"})
    assert posted.status_code == 200
    media_id = posted.json()["media_id"]
    assert len(media_id) == 64

    fetched = bare_client.get(f"/media/{media_id}")
    assert fetched.status_code == 200
    assert fetched.content == b"image-bytes"
    assert fetched.headers["content-type"].startswith("image/png")


def test_media_dedup_over_http(bare_client):
    ids = {bare_client.post("/media", content=b"same",
                            headers={"Content-Type": "image/png"}).json()["media_id"]
           for _ in range(5)}
    assert len(ids) == 1


def test_media_errors(bare_client):
    assert bare_client.get(f"/media/{'0' * 64}").status_code == 404
    bad = bare_client.get("/media/not-a-hash")
    assert bad.status_code == 400
    assert bad.json()["error"] == "MalformedId"
    missing_mime = bare_client.post("/media", content=b"x", headers={"Content-Type": ""})
    assert missing_mime.status_code == 400


# --- ingestion -------------------------------------------------------------------


def test_post_catalog_inline_doc(bare_client):
    doc = {"defects": [{"id": "defect:x", "name": "x", "category": "c",
                        "machines": [], "descriptions": ["a small mark"],
                        "images": [], "rules": []}]}
    response = bare_client.post("/catalog", json=doc)
    assert response.status_code == 200
    assert response.json()["nodes_created"] == 2  # defect + category
    assert bare_client.get("/defects/defect:x").status_code == 200

    wrapped = bare_client.post("/catalog", json={"catalog": doc, "base_dir": "."})
    assert wrapped.status_code == 200
    assert wrapped.json()["nodes_created"] == 0  # idempotent reload


def test_post_catalog_malformed(bare_client):
    response = bare_client.post("/catalog", json={"defects": [{"name": "no id"}]})
    assert response.status_code == 400
    assert response.json()["error"] == "ParseError"


def test_post_document(bare_client):
    response = bare_client.post("/documents", content=b"Stain belongs to surface defects.",
                                headers={"Content-Type": "text/plain"})
    assert response.status_code == 200
    body = response.json()
    assert body["triplets_extracted"] == 1
    assert body["media_stored"] == 1


def test_post_triplet(bare_client):
    response = bare_client.post("/triplets", json={"subject": "stain",
                                                   "relation": "belongs_to",
                                                   "object": "surface defects"})
    assert response.status_code == 200
    assert response.json() == {"subject": "stain", "relation": "belongs_to",
                               "object": "surface defects"}
    empty = bare_client.post("/triplets", json={"subject": "", "relation": "r",
                                                "object": "o"})
    assert empty.status_code == 400


# --- search ---------------------------------------------------------------------


def test_search_text(client):
    response = client.post("/search", json={"text": "a dark circular mark", "k": 5})
    assert response.status_code == 200
    body = response.json()
    assert body["degraded"] is False
    assert len(body["results"]) == 5
    first = body["results"][0]
    assert set(first) == {"defect_id", "fused_score", "channels", "evidence"}
    assert first["channels"]["text"]["rank"] == 1


def test_search_validation(client):
    assert client.post("/search", json={}).status_code == 400  # NoModality
    assert client.post("/search", json={"k": 0, "text": "x"}).status_code == 422
    assert client.post("/search",
                       json={"text": "x", "rating_weight": -1}).status_code == 422
    unknown = client.post("/search", json={"image_media_id": "0" * 64})
    assert unknown.status_code == 404
    assert unknown.json()["error"] == "UnknownMedia"


def test_search_defaults_come_from_config(client):
    response = client.post("/search", json={"text": "mark"})
    assert len(response.json()["results"]) == 10  # config default_k


# --- workflow over http --------------------------------------------------------------


def test_full_session_flow(client):
    session = client.post("/sessions", json={"product_id": "prod-1",
                                             "operator_id": "op-1"}).json()
    sid = session["session_id"]
    assert session["state"] == "ProductScanned"

    attached = client.post(f"/sessions/{sid}/defect", json={"defect_id": "defect:stain"})
    assert attached.json()["state"] == "DefectIdentified"

    assessed = client.post(f"/sessions/{sid}/assessed")
    assert assessed.json()["session"]["state"] == "SeverityAssessed"
    assert assessed.json()["instruction"]
    assert len(assessed.json()["guide_media_ids"]) == 2

    measured = client.post(f"/sessions/{sid}/measurements",
                           json={"metric": "depth", "value": 0.1, "unit": "mm"})
    assert measured.status_code == 200

    suggestion = client.post(f"/sessions/{sid}/suggestion").json()
    assert suggestion["action"] == "Conform"

    decided = client.post(f"/sessions/{sid}/decision", json={"decision": "Conform"})
    assert decided.json()["state"] == "DecisionRecorded"

    fetched = client.get(f"/sessions/{sid}")
    assert fetched.status_code == 200
    assert fetched.json() == decided.json()


def test_workflow_error_statuses(client):
    assert client.post("/sessions/s-999999/defect",
                       json={"defect_id": "defect:stain"}).status_code == 404

    sid = client.post("/sessions", json={"product_id": "p", "operator_id": "o"}) \
        .json()["session_id"]
    unknown = client.post(f"/sessions/{sid}/defect", json={"defect_id": "defect:nope"})
    assert unknown.status_code == 404
    assert unknown.json()["error"] == "UnknownDefect"

    out_of_order = client.post(f"/sessions/{sid}/assessed")
    assert out_of_order.status_code == 409
    assert out_of_order.json()["error"] == "IllegalTransition"

    client.post(f"/sessions/{sid}/defect", json={"defect_id": "defect:stain"})
    client.post(f"/sessions/{sid}/assessed")
    nonfinite = client.post(f"/sessions/{sid}/measurements",
                            content='{"metric": "depth", "value": 1e400, "unit": "mm"}',
                            headers={"Content-Type": "application/json"})
    assert nonfinite.status_code in (400, 422)  # non-finite is rejected either way

    client.post(f"/sessions/{sid}/measurements",
                json={"metric": "depth", "value": 0.1, "unit": "mm"})
    client.post(f"/sessions/{sid}/suggestion")
    override = client.post(f"/sessions/{sid}/decision", json={"decision": "Scrap"})
    assert override.status_code == 409
    assert override.json()["error"] == "OverrideCommentRequired"
    bad_decision = client.post(f"/sessions/{sid}/decision", json={"decision": "Maybe"})
    assert bad_decision.status_code == 400  # unknown enum value

    ok = client.post(f"/sessions/{sid}/decision",
                     json={"decision": "Scrap", "override_comment": "too deep"})
    assert ok.status_code == 200


def test_measurement_with_commentary_media(client):
    voice = client.post("/media", content=b"voice-note",
                        headers={"Content-Type": "audio/wav"}).json()["media_id"]
    sid = client.post("/sessions", json={"product_id": "p", "operator_id": "o"}) \
        .json()["session_id"]
    client.post(f"/sessions/{sid}/defect", json={"defect_id": "defect:stain"})
    client.post(f"/sessions/{sid}/assessed")
    good = client.post(f"/sessions/{sid}/measurements",
                       json={"metric": "depth", "value": 0.3, "unit": "mm",
                             "commentary_media_id": voice})
    assert good.status_code == 200
    assert good.json()["commentary_media_id"] == voice
    bad = client.post(f"/sessions/{sid}/measurements",
                      json={"metric": "depth", "value": 0.3, "unit": "mm",
                            "commentary_media_id": "0" * 64})
    assert bad.status_code == 404


# --- ratings, reads, bench -------------------------------------------------------------


def test_ratings_endpoint(client):
    response = client.post("/ratings", json={"node_id": "defect:stain",
                                             "operator_id": "op-1", "score": 4})
    assert response.status_code == 200
    assert response.json() == {"node_id": "defect:stain", "mean": 4.0, "count": 1}
    assert client.post("/ratings", json={"node_id": "defect:ghost",
                                         "operator_id": "op-1", "score": 4}).status_code == 404
    out_of_range = client.post("/ratings", json={"node_id": "defect:stain",
                                                 "operator_id": "op-1", "score": 9})
    assert out_of_range.status_code == 400
    assert out_of_range.json()["error"] == "ScoreOutOfRange"


def test_defect_detail_endpoint(client):
    response = client.get("/defects/defect:stain")
    assert response.status_code == 200
    body = response.json()
    assert body["node"]["id"] == "defect:stain"
    assert len(body["contexts"]) == 3
    assert len(body["rules"]) == 3
    assert client.get("/defects/defect:ghost").status_code == 404


def test_health_endpoint(client):
    response = client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"
    assert body["counts"]["contexts"] == 84


def test_bench_endpoint(bare_client):
    response = bare_client.post("/bench/run", json={"dataset": "animal", "seed": 0,
                                                    "ns": [1, 5]})
    assert response.status_code == 200
    body = response.json()
    assert body["dataset_name"] == "animal" and body["case_count"] == 50
    assert set(body["top_n"]) == {"1", "5"}
    assert bare_client.post("/bench/run", json={"dataset": "nope"}).status_code == 400


def test_search_response_is_json_stable(client):
    a = client.post("/search", json={"text": "a dark circular mark", "k": 28}).json()
    b = client.post("/search", json={"text": "a dark circular mark", "k": 28}).json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


# --- bearer auth -----------------------------------------------------------------------


def test_bearer_auth_guards_everything_but_health(tmp_path):
    service = OakService(ServiceConfig(data_dir=tmp_path / "data", bearer_token="sesame"))
    client = TestClient(create_app(service))

    assert client.get("/health").status_code == 200  # stays open
    assert client.post("/search", json={"text": "x"}).status_code == 401
    assert client.get("/media/" + "0" * 64).status_code == 401
    assert client.post("/sessions", json={"product_id": "p",
                                          "operator_id": "o"}).status_code == 401
    wrong = client.post("/search", json={"text": "x"},
                        headers={"Authorization": "Bearer wrong"})
    assert wrong.status_code == 401

    authed = client.post("/sessions", json={"product_id": "p", "operator_id": "o"},
                         headers={"Authorization": "Bearer sesame"})
    assert authed.status_code == 200
