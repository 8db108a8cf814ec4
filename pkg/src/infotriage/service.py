"""HTTP API over the engine.

JSON in and out everywhere except corpus upload, which is a multipart
file. All errors share one body shape: {"error": string} with an optional
"detail" object carrying structured context (line numbers, missing ids).
The analyst console is a browser client, so CORS is open.
"""

from __future__ import annotations

from contextlib import asynccontextmanager

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .classify import StanceLabel, UnsupportedCapability
from .config import ServiceConfig
from .corpus import DuplicateId, IngestError, MalformedRecord
from .engine import (
    Engine,
    GoldCoverageGap,
    SearchNotDone,
    UnknownBackend,
    UnknownCorpus,
    UnknownDocument,
    UnknownSearch,
)
from .evaluate import GoldError, _relevance_of, gold_from_corpus, load_gold
from .query import InvalidQuery, UnknownSession
from .queryspec import query_from_obj, query_to_obj
from .store import StoreCorrupt

__all__ = ["create_app"]


class SessionCreate(BaseModel):
    corpus_id: str


class SearchCreate(BaseModel):
    query: dict
    backend: str = "lexicon"


class FeedbackBody(BaseModel):
    doc_id: str
    mark: str = Field(pattern="^(relevant|irrelevant|clear)$")


class GoldRow(BaseModel):
    doc_id: str
    relevant: bool | None = None
    stance: str | None = None


class MetricsBody(BaseModel):
    gold: list[GoldRow] | None = None
    gold_path: str | None = None
    target_stance: str | None = None


def _session_view(session) -> dict:
    return {
        "session_id": session.session_id,
        "corpus_id": session.corpus_id,
        "history": [
            {
                "query": query_to_obj(entry.query),
                "result_ids": list(entry.result_ids),
                "timestamp": entry.timestamp,
            }
            for entry in session.history
        ],
        "feedback": {doc: mark.value for doc, mark in session.feedback.items()},
    }


def _search_view(search) -> dict:
    view = {
        "search_id": search.search_id,
        "session_id": search.session_id,
        "corpus_id": search.corpus_id,
        "backend": search.backend,
        "query": query_to_obj(search.query),
        "status": search.status.value,
        "created_at": search.created_at,
    }
    if search.error is not None:
        view["error"] = search.error
    if search.result_count is not None:
        view["result_count"] = search.result_count
    return view


def _error(status: int, message: str, detail: dict | None = None) -> JSONResponse:
    body: dict = {"error": message}
    if detail is not None:
        body["detail"] = detail
    return JSONResponse(status_code=status, content=body)


def create_app(config: ServiceConfig | None = None,
               engine: Engine | None = None) -> FastAPI:
    if engine is None:
        engine = Engine(config if config is not None else ServiceConfig())
    cfg = engine.config

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        engine.shutdown()

    app = FastAPI(title="infotriage", lifespan=lifespan)
    app.state.engine = engine
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(RequestValidationError)
    async def on_validation(request: Request, exc: RequestValidationError):
        return _error(422, "invalid request body", {"errors": exc.errors()})

    @app.exception_handler(UnknownCorpus)
    async def on_unknown_corpus(request: Request, exc: UnknownCorpus):
        return _error(404, f"unknown corpus {exc.corpus_id!r}")

    @app.exception_handler(UnknownSession)
    async def on_unknown_session(request: Request, exc: UnknownSession):
        return _error(404, f"unknown session {exc.session_id!r}")

    @app.exception_handler(UnknownSearch)
    async def on_unknown_search(request: Request, exc: UnknownSearch):
        return _error(404, f"unknown search {exc.search_id!r}")

    @app.exception_handler(UnknownBackend)
    async def on_unknown_backend(request: Request, exc: UnknownBackend):
        return _error(404, f"unknown backend {exc.name!r}")

    @app.exception_handler(UnknownDocument)
    async def on_unknown_document(request: Request, exc: UnknownDocument):
        return _error(404, f"unknown document {exc.doc_id!r}")

    @app.exception_handler(InvalidQuery)
    async def on_invalid_query(request: Request, exc: InvalidQuery):
        return _error(422, f"invalid query spec: {exc}")

    @app.exception_handler(UnsupportedCapability)
    async def on_unsupported(request: Request, exc: UnsupportedCapability):
        return _error(422, str(exc),
                      {"backend": exc.backend, "capability": exc.capability})

    @app.exception_handler(SearchNotDone)
    async def on_not_done(request: Request, exc: SearchNotDone):
        return _error(409, str(exc), {"status": exc.status.value})

    @app.exception_handler(GoldCoverageGap)
    async def on_coverage_gap(request: Request, exc: GoldCoverageGap):
        return _error(422, str(exc), {"missing": exc.missing})

    @app.exception_handler(GoldError)
    async def on_gold_error(request: Request, exc: GoldError):
        return _error(422, f"bad gold data: {exc}")

    @app.exception_handler(StoreCorrupt)
    async def on_store_corrupt(request: Request, exc: StoreCorrupt):
        return _error(500, f"store corruption: {exc}")

    @app.post("/corpora")
    async def create_corpus(file: UploadFile = File(...),
                            format: str = Form("jsonl")):
        if format not in ("jsonl", "csv"):
            return _error(400, f"unknown corpus format {format!r}")
        data = await file.read()
        if len(data) > cfg.upload_limit_bytes:
            return _error(413, "upload exceeds the size limit",
                          {"limit_bytes": cfg.upload_limit_bytes,
                           "got_bytes": len(data)})
        try:
            corpus_id, created = engine.create_corpus(data, format)
        except MalformedRecord as exc:
            return _error(400, f"malformed record: {exc}",
                          {"line": exc.line_no})
        except DuplicateId as exc:
            return _error(400, f"duplicate document id {exc.doc_id!r}")
        except IngestError as exc:
            return _error(400, str(exc))
        meta = engine.corpus_meta(corpus_id)
        meta["created"] = created
        return JSONResponse(status_code=201 if created else 200, content=meta)

    @app.get("/corpora/{corpus_id}")
    async def get_corpus(corpus_id: str):
        return engine.corpus_meta(corpus_id)

    @app.post("/sessions", status_code=201)
    async def create_session(body: SessionCreate):
        return _session_view(engine.create_session(body.corpus_id))

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        return _session_view(engine.get_session(session_id))

    @app.post("/sessions/{session_id}/searches", status_code=202)
    async def create_search(session_id: str, body: SearchCreate):
        query = query_from_obj(body.query)
        search = engine.submit_search(session_id, query, body.backend)
        return _search_view(search)

    @app.get("/searches/{search_id}")
    async def get_search(search_id: str):
        return _search_view(engine.get_search(search_id))

    @app.get("/searches/{search_id}/results")
    async def get_results(search_id: str, offset: int = 0,
                          limit: int | None = None):
        if offset < 0 or (limit is not None and limit < 0):
            return _error(422, "offset and limit must be non-negative")
        return engine.get_results(search_id, offset=offset, limit=limit)

    @app.post("/sessions/{session_id}/feedback")
    async def post_feedback(session_id: str, body: FeedbackBody):
        return _session_view(engine.feedback(session_id, body.doc_id, body.mark))

    @app.post("/searches/{search_id}/metrics")
    async def post_metrics(search_id: str, body: MetricsBody):
        target = None
        if body.target_stance is not None:
            try:
                target = StanceLabel(body.target_stance)
            except ValueError:
                return _error(422, f"unknown stance {body.target_stance!r}")
        if body.gold is not None:
            gold = {}
            for row in body.gold:
                payload: dict = {}
                if row.relevant is not None:
                    payload["relevant"] = row.relevant
                if row.stance is not None:
                    payload["stance"] = row.stance
                gold[row.doc_id] = _relevance_of(payload, target,
                                                 f"doc {row.doc_id!r}")
        elif body.gold_path is not None:
            try:
                with open(body.gold_path, encoding="utf-8") as f:
                    gold = load_gold(f.read(), target)
            except OSError as exc:
                return _error(422, f"cannot read gold file: {exc}")
        else:
            search = engine.get_search(search_id)
            gold = gold_from_corpus(engine.get_corpus(search.corpus_id), target)
        return engine.metrics(search_id, gold)

    @app.get("/backends")
    async def get_backends():
        return {"backends": engine.list_backends()}

    return app
