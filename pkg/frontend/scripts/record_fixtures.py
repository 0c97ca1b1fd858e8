"""Record real service responses into tests/fixtures.json.

Seeds a service with the synthetic defect catalog, then captures, over
plain HTTP through the test client:

* ten text searches (queries drawn from the generated retrieval cases),
* a media upload (commentary blob) and its id,
* one full inspection workflow: start, attach, assessed, measurement,
  suggestion, decision, plus the session re-fetches the console issues,
* the defect detail used by the measurement guide panel.

Run from the repository root after installing the package:

    python3 frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import base64
import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from oak.api import create_app
from oak.bench import generate_defect_benchmark
from oak.service import OakService, ServiceConfig

OUT_PATH = Path(__file__).resolve().parent.parent / "tests" / "fixtures.json"
SEARCH_COUNT = 10
COMMENTARY = b"console-commentary-" + bytes(range(64))
COMMENTARY_MIME = "audio/webm"


def must(response, expect=200):
    assert response.status_code == expect, (response.status_code, response.text)
    return response.json()


def main() -> None:
    bench = generate_defect_benchmark(0)
    with tempfile.TemporaryDirectory() as tmp:
        service = OakService(ServiceConfig(data_dir=Path(tmp) / "data"))
        catalog_path = bench.materialize(Path(tmp) / "catalog")
        service.ingest_catalog(catalog_path)
        client = TestClient(create_app(service))

        searches = []
        for case in bench.cases[:SEARCH_COUNT]:
            body = {"text": case.query}
            searches.append({"body": body, "response": must(client.post("/search", json=body))})

        upload = must(client.post(
            "/media", content=COMMENTARY, headers={"Content-Type": COMMENTARY_MIME}))
        commentary_id = upload["media_id"]

        defect_id = bench.cases[0].truth_node_id
        start = must(client.post(
            "/sessions", json={"product_id": "P-1042", "operator_id": "op-7"}))
        sid = start["session_id"]
        attach = must(client.post(f"/sessions/{sid}/defect", json={"defect_id": defect_id}))
        assessed = must(client.post(f"/sessions/{sid}/assessed"))
        measurement = must(client.post(f"/sessions/{sid}/measurements", json={
            "metric": "depth", "value": 0.1, "unit": "mm",
            "commentary_media_id": commentary_id}))
        session_after_measurement = must(client.get(f"/sessions/{sid}"))
        suggestion = must(client.post(f"/sessions/{sid}/suggestion"))
        session_after_suggestion = must(client.get(f"/sessions/{sid}"))
        decision = must(client.post(
            f"/sessions/{sid}/decision",
            json={"decision": suggestion["action"], "override_comment": None}))

        detail = must(client.get(f"/defects/{defect_id}"))

        fixtures = {
            "searches": searches,
            "commentary": {
                "bytes_b64": base64.b64encode(COMMENTARY).decode("ascii"),
                "mime": COMMENTARY_MIME,
                "media_id": commentary_id,
            },
            "workflow": {
                "defect_id": defect_id,
                "start": {"body": {"product_id": "P-1042", "operator_id": "op-7"},
                          "response": start},
                "attach": attach,
                "assessed": assessed,
                "measurement": {
                    "body": {"metric": "depth", "value": 0.1, "unit": "mm",
                             "commentary_media_id": commentary_id},
                    "response": measurement,
                },
                "session_after_measurement": session_after_measurement,
                "suggestion": suggestion,
                "session_after_suggestion": session_after_suggestion,
                "decision": {"body": {"decision": suggestion["action"],
                                      "override_comment": None},
                             "response": decision},
            },
            "defect_detail": detail,
        }
        OUT_PATH.write_text(json.dumps(fixtures, indent=2, sort_keys=True) + "\n")
        print(f"wrote {OUT_PATH} "
              f"({len(searches)} searches, workflow session {sid}, defect {defect_id})")


if __name__ == "__main__":
    main()
