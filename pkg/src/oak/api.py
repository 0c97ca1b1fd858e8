"""HTTP/JSON surface over OakService.

All bodies are JSON except the two raw-bytes media/document uploads,
which take the payload as the request body with its Content-Type
header. Errors map onto: 404 for unknown things, 409 for conflicts
(including workflow-order violations), 400 for invalid input, 503 for
an unreachable remote provider.

When a bearer token is configured every endpoint except GET /health
requires `Authorization: Bearer <token>`.
"""

from __future__ import annotations

from typing import Optional

from fastapi import Depends, FastAPI, HTTPException, Request, Response
from pydantic import BaseModel, Field

from . import errors as E
from .graph import Provenance, Triplet
from .service import OakService, SearchRequest
from .workflow import Decision

_STATUS_BY_ERROR: tuple[tuple[type, int], ...] = (
    (E.ProviderUnavailable, 503),
    (E.NotFound, 404),
    (E.UnknownNode, 404),
    (E.UnknownSession, 404),
    (E.UnknownDefect, 404),
    (E.UnknownMedia, 404),
    (E.MissingEndpoint, 404),
    (E.KindConflict, 409),
    (E.IllegalTransition, 409),
    (E.DuplicatePriority, 409),
    (E.OverrideCommentRequired, 409),
    (E.VersionMismatch, 409),
    (E.CorruptSnapshot, 409),
)


def _status_for(exc: Exception) -> int:
    for error_type, status in _STATUS_BY_ERROR:
        if isinstance(exc, error_type):
            return status
    return 400  # every remaining domain error is invalid input


class TripletBody(BaseModel):
    subject: str
    relation: str
    object: str


class SearchBody(BaseModel):
    text: Optional[str] = None
    audio_transcript: Optional[str] = None
    image_media_id: Optional[str] = None
    k: Optional[int] = Field(default=None, ge=1)
    rating_weight: Optional[float] = Field(default=None, ge=0)


class SessionBody(BaseModel):
    product_id: str
    operator_id: str


class DefectBody(BaseModel):
    defect_id: str


class MeasurementBody(BaseModel):
    metric: str
    value: float
    unit: str = ""
    commentary_media_id: Optional[str] = None


class DecisionBody(BaseModel):
    decision: str
    override_comment: Optional[str] = None


class RatingBody(BaseModel):
    node_id: str
    operator_id: str
    score: int


class BenchBody(BaseModel):
    dataset: str
    seed: int = 0
    ns: list[int] = Field(default_factory=lambda: [1, 5, 10])


def create_app(service: OakService) -> FastAPI:
    app = FastAPI(title="oak", docs_url=None, redoc_url=None)

    def require_auth(request: Request) -> None:
        token = service.config.bearer_token
        if not token:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="missing or invalid bearer token")

    authed = [Depends(require_auth)]

    @app.exception_handler(E.OakError)
    async def domain_error_handler(_request: Request, exc: E.OakError):
        from fastapi.responses import JSONResponse
        return JSONResponse(status_code=_status_for(exc),
                            content={"error": type(exc).__name__, "detail": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error_handler(_request: Request, exc: ValueError):
        from fastapi.responses import JSONResponse
        return JSONResponse(status_code=400,
                            content={"error": "ValueError", "detail": str(exc)})

    # --- media -------------------------------------------------------------

    @app.post("/media", dependencies=authed)
    async def put_media(request: Request):
        data = await request.body()
        mime = request.headers.get("content-type", "")
        media_id = service.media.put_media(data, mime)
        return {"media_id": media_id}

    @app.get("/media/{media_id}", dependencies=authed)
    def get_media(media_id: str):
        data, mime = service.media.get_media(media_id)
        return Response(content=data, media_type=mime)

    # --- ingestion -----------------------------------------------------------

    @app.post("/catalog", dependencies=authed)
    async def post_catalog(request: Request):
        body = await request.json()
        if "catalog" in body:
            doc, base_dir = body["catalog"], body.get("base_dir", ".")
        else:
            doc, base_dir = body, "."
        report = service.ingest_catalog_doc(doc, base_dir)
        return report.to_dict()

    @app.post("/documents", dependencies=authed)
    async def post_document(request: Request):
        data = await request.body()
        mime = request.headers.get("content-type", "")
        report = service.ingest_document(data, mime)
        return report.to_dict()

    @app.post("/triplets", dependencies=authed)
    def post_triplet(body: TripletBody):
        triplet = Triplet(subject=body.subject, relation=body.relation,
                          object=body.object, provenance=Provenance(None, 0, 0))
        subject, edge, obj = service.insert_triplet(triplet)
        return {"subject": subject.id, "relation": edge.rel, "object": obj.id}

    # --- search ----------------------------------------------------------------

    @app.post("/search", dependencies=authed)
    def post_search(body: SearchBody):
        req = SearchRequest(
            text=body.text,
            audio_transcript=body.audio_transcript,
            image_media_id=body.image_media_id,
            k=body.k if body.k is not None else service.config.default_k,
            rating_weight=(body.rating_weight if body.rating_weight is not None
                           else service.config.default_rating_weight),
        )
        return service.multimodal_search(req).to_dict()

    # --- workflow ---------------------------------------------------------------

    @app.post("/sessions", dependencies=authed)
    def start_session(body: SessionBody):
        return service.engine.start_session(body.product_id, body.operator_id).to_dict()

    @app.get("/sessions/{session_id}", dependencies=authed)
    def get_session(session_id: str):
        return service.engine.get_session(session_id).to_dict()

    @app.post("/sessions/{session_id}/defect", dependencies=authed)
    def attach_defect(session_id: str, body: DefectBody):
        return service.engine.attach_defect(session_id, body.defect_id).to_dict()

    @app.post("/sessions/{session_id}/assessed", dependencies=authed)
    def mark_assessed(session_id: str):
        info = service.engine.mark_assessed(session_id)
        return {
            "session": info.session.to_dict(),
            "instruction": info.instruction,
            "guide_media_ids": info.guide_media_ids,
            "missing_instruction": info.missing_instruction,
        }

    @app.post("/sessions/{session_id}/measurements", dependencies=authed)
    def log_measurement(session_id: str, body: MeasurementBody):
        record = service.engine.log_measurement(
            session_id, body.metric, body.value, body.unit, body.commentary_media_id)
        return record.to_dict()

    @app.post("/sessions/{session_id}/suggestion", dependencies=authed)
    def issue_suggestion(session_id: str):
        return service.engine.evaluate_conformity(session_id).to_dict()

    @app.post("/sessions/{session_id}/decision", dependencies=authed)
    def record_decision(session_id: str, body: DecisionBody):
        return service.engine.record_decision(
            session_id, Decision(body.decision), body.override_comment).to_dict()

    # --- ratings -------------------------------------------------------------------

    @app.post("/ratings", dependencies=authed)
    def rate(body: RatingBody):
        aggregate = service.ratings.rate_entry(body.node_id, body.operator_id, body.score)
        return {"node_id": body.node_id, "mean": aggregate.mean, "count": aggregate.count}

    # --- reads -------------------------------------------------------------------

    @app.get("/defects/{node_id}", dependencies=authed)
    def defect_detail(node_id: str):
        return service.defect_detail(node_id)

    @app.get("/health")
    def health():
        return service.health()

    # --- benchmarks -----------------------------------------------------------------

    @app.post("/bench/run", dependencies=authed)
    def bench_run(body: BenchBody):
        report = service.run_benchmark(body.dataset, body.seed, body.ns)
        return report.to_dict()

    return app
