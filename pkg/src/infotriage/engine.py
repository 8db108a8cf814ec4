"""Engine: durable sessions, corpora, and async searches over the store.

The engine owns all mutable state. Every state change is journaled before
it is acknowledged, so a killed process recovers to a consistent picture:
searches interrupted mid-flight come back as Pending and are re-enqueued,
completed ones keep their atomically written results.
"""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .classify import ClassifierBackend, LexiconBackend, UnsupportedCapability, load_lexicon
from .config import BackendConfig, ServiceConfig
from .corpus import Corpus, _digest_corpus_id, ingest_bytes
from .evaluate import GoldRelevance, confusion, prf
from .query import (
    FeedbackMark,
    Query,
    QueryKind,
    SearchSession,
    UnknownSession,
    run_search,
)
from .queryspec import query_from_obj, query_to_obj
from .remote import RemoteBackend
from .store import Store

__all__ = [
    "Engine",
    "SearchStatus",
    "StoredSearch",
    "UnknownCorpus",
    "UnknownBackend",
    "UnknownSearch",
    "UnknownDocument",
    "SearchNotDone",
    "GoldCoverageGap",
]


class UnknownCorpus(KeyError):
    def __init__(self, corpus_id: str):
        super().__init__(corpus_id)
        self.corpus_id = corpus_id


class UnknownBackend(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name


class UnknownSearch(KeyError):
    def __init__(self, search_id: str):
        super().__init__(search_id)
        self.search_id = search_id


class UnknownDocument(KeyError):
    def __init__(self, doc_id: str):
        super().__init__(doc_id)
        self.doc_id = doc_id


class SearchNotDone(Exception):
    def __init__(self, search_id: str, status: "SearchStatus"):
        super().__init__(f"search {search_id} is {status.value}, not done")
        self.search_id = search_id
        self.status = status


class GoldCoverageGap(Exception):
    def __init__(self, missing: list[str]):
        super().__init__(f"gold labels missing for {len(missing)} documents")
        self.missing = missing


class SearchStatus(str, Enum):
    Pending = "pending"
    Running = "running"
    Done = "done"
    Failed = "failed"


@dataclass
class StoredSearch:
    search_id: str
    session_id: str
    corpus_id: str
    backend: str
    query: Query
    status: SearchStatus
    created_at: float
    error: str | None = None
    result_count: int | None = None


_KIND_CAPABILITY = {
    QueryKind.KeywordOnly: None,
    QueryKind.Sentiment: "sentiment",
    QueryKind.Aspect: "aspects",
    QueryKind.Stance: "stance",
}

_FEEDBACK_WIRE = {
    "relevant": FeedbackMark.Relevant,
    "irrelevant": FeedbackMark.Irrelevant,
    "clear": FeedbackMark.Unmarked,
}


def build_backend(cfg: BackendConfig) -> ClassifierBackend:
    if cfg.type == "remote":
        return RemoteBackend(url=cfg.url, capabilities=frozenset(cfg.capabilities),
                             timeout=cfg.timeout, pool_size=cfg.pool_size,
                             name=cfg.name)
    lexicon = load_lexicon(cfg.lexicon_path) if cfg.lexicon_path else None
    return LexiconBackend(lexicon=lexicon, window=cfg.window,
                          theta_rel=cfg.theta_rel, name=cfg.name)


class Engine:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = Store(config.store_dir)
        self.backends: dict[str, ClassifierBackend] = {
            name: build_backend(cfg) for name, cfg in config.backends.items()
        }
        self._lock = threading.RLock()
        self._corpora_meta: dict[str, dict] = {}
        self._corpora_cache: dict[str, Corpus] = {}
        self._sessions: dict[str, SearchSession] = {}
        self._searches: dict[str, StoredSearch] = {}
        self._pool = ThreadPoolExecutor(max_workers=4,
                                        thread_name_prefix="search")
        self._recover()

    # -- lifecycle --------------------------------------------------------

    def _recover(self) -> None:
        to_requeue: list[str] = []
        for ev in self.store.replay():
            kind = ev["event"]
            if kind == "corpus":
                self._corpora_meta[ev["corpus_id"]] = {
                    "corpus_id": ev["corpus_id"],
                    "format": ev["format"],
                    "documents": ev["documents"],
                    "created_at": ev["ts"],
                }
            elif kind == "session":
                self._sessions[ev["session_id"]] = SearchSession(
                    session_id=ev["session_id"], corpus_id=ev["corpus_id"])
            elif kind == "search":
                self._searches[ev["search_id"]] = StoredSearch(
                    search_id=ev["search_id"], session_id=ev["session_id"],
                    corpus_id=ev["corpus_id"], backend=ev["backend"],
                    query=query_from_obj(ev["query"]),
                    status=SearchStatus.Pending, created_at=ev["ts"])
            elif kind == "running":
                self._searches[ev["search_id"]].status = SearchStatus.Running
            elif kind == "done":
                search = self._searches[ev["search_id"]]
                search.status = SearchStatus.Done
                results = self.store.get_results(search.search_id)
                search.result_count = len(results["doc_ids"])
                session = self._sessions.get(search.session_id)
                if session is not None:
                    session.record(search.query, results["doc_ids"],
                                   timestamp=ev["ts"])
            elif kind == "failed":
                search = self._searches[ev["search_id"]]
                search.status = SearchStatus.Failed
                search.error = ev.get("error", "unknown failure")
            elif kind == "feedback":
                session = self._sessions.get(ev["session_id"])
                if session is not None:
                    session.mark(ev["doc_id"], FeedbackMark(ev["mark"]))
        for search in self._searches.values():
            if search.status in (SearchStatus.Pending, SearchStatus.Running):
                search.status = SearchStatus.Pending
                to_requeue.append(search.search_id)
        for search_id in to_requeue:
            self._pool.submit(self._execute, search_id)

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True)
        for backend in self.backends.values():
            close = getattr(backend, "close", None)
            if close:
                close()
        self.store.close()

    # -- corpora ----------------------------------------------------------

    def create_corpus(self, data: bytes, fmt: str) -> tuple[str, bool]:
        """Returns (corpus_id, created); re-uploading identical bytes in
        the same format is a no-op that yields the original id.
        """
        corpus_id = _digest_corpus_id(fmt, data)
        with self._lock:
            if corpus_id in self._corpora_meta:
                return corpus_id, False
        corpus = ingest_bytes(data, fmt)  # may raise IngestError
        self.store.put_corpus(corpus_id, data)
        ev = self.store.append("corpus", corpus_id=corpus_id, format=fmt,
                               documents=len(corpus.documents))
        with self._lock:
            self._corpora_meta[corpus_id] = {
                "corpus_id": corpus_id, "format": fmt,
                "documents": len(corpus.documents), "created_at": ev["ts"],
            }
            self._corpora_cache[corpus_id] = corpus
        return corpus_id, True

    def corpus_meta(self, corpus_id: str) -> dict:
        with self._lock:
            if corpus_id not in self._corpora_meta:
                raise UnknownCorpus(corpus_id)
            return dict(self._corpora_meta[corpus_id])

    def get_corpus(self, corpus_id: str) -> Corpus:
        with self._lock:
            if corpus_id in self._corpora_cache:
                return self._corpora_cache[corpus_id]
            if corpus_id not in self._corpora_meta:
                raise UnknownCorpus(corpus_id)
            fmt = self._corpora_meta[corpus_id]["format"]
        corpus = ingest_bytes(self.store.get_corpus(corpus_id), fmt)
        with self._lock:
            self._corpora_cache[corpus_id] = corpus
        return corpus

    # -- sessions ---------------------------------------------------------

    def create_session(self, corpus_id: str) -> SearchSession:
        with self._lock:
            if corpus_id not in self._corpora_meta:
                raise UnknownCorpus(corpus_id)
        session = SearchSession(session_id="s" + uuid.uuid4().hex[:16],
                                corpus_id=corpus_id)
        self.store.append("session", session_id=session.session_id,
                          corpus_id=corpus_id)
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def get_session(self, session_id: str) -> SearchSession:
        with self._lock:
            if session_id not in self._sessions:
                raise UnknownSession(session_id)
            return self._sessions[session_id]

    def feedback(self, session_id: str, doc_id: str, mark: str) -> SearchSession:
        if mark not in _FEEDBACK_WIRE:
            raise ValueError(f"mark must be one of {sorted(_FEEDBACK_WIRE)}")
        session = self.get_session(session_id)
        corpus = self.get_corpus(session.corpus_id)
        if corpus.get(doc_id) is None:
            raise UnknownDocument(doc_id)
        self.store.append("feedback", session_id=session_id, doc_id=doc_id,
                          mark=_FEEDBACK_WIRE[mark].value)
        with self._lock:
            session.mark(doc_id, _FEEDBACK_WIRE[mark])
        return session

    # -- searches ---------------------------------------------------------

    def submit_search(self, session_id: str, query: Query,
                      backend_name: str) -> StoredSearch:
        session = self.get_session(session_id)
        if backend_name not in self.backends:
            raise UnknownBackend(backend_name)
        backend = self.backends[backend_name]
        needed = _KIND_CAPABILITY[query.kind]
        if needed is not None and needed not in backend.capabilities:
            raise UnsupportedCapability(backend_name, needed)
        search = StoredSearch(search_id="q" + uuid.uuid4().hex[:16],
                              session_id=session_id,
                              corpus_id=session.corpus_id,
                              backend=backend_name, query=query,
                              status=SearchStatus.Pending, created_at=0.0)
        ev = self.store.append("search", search_id=search.search_id,
                               session_id=session_id,
                               corpus_id=session.corpus_id,
                               backend=backend_name,
                               query=query_to_obj(query))
        search.created_at = ev["ts"]
        with self._lock:
            self._searches[search.search_id] = search
        self._pool.submit(self._execute, search.search_id)
        return search

    def _execute(self, search_id: str) -> None:
        with self._lock:
            search = self._searches[search_id]
            search.status = SearchStatus.Running
        self.store.append("running", search_id=search_id)
        try:
            corpus = self.get_corpus(search.corpus_id)
            backend = self.backends[search.backend]
            parallelism = self.config.parallelism or None
            result = run_search(search.query, corpus, backend,
                                parallelism=parallelism)
        except Exception as exc:
            message = str(exc) if str(exc) else type(exc).__name__
            self.store.append("failed", search_id=search_id, error=message)
            with self._lock:
                search.status = SearchStatus.Failed
                search.error = message
            return
        payload = {
            "search_id": search_id,
            "doc_ids": result.doc_ids,
            "rationales": {d: r.as_dict() for d, r in result.rationales.items()},
            "skipped": result.skipped,
            "calls_attempted": result.calls_attempted,
        }
        self.store.put_results(search_id, payload)
        ev = self.store.append("done", search_id=search_id)
        with self._lock:
            search.status = SearchStatus.Done
            search.result_count = len(result.doc_ids)
            session = self._sessions.get(search.session_id)
            if session is not None:
                session.record(search.query, result.doc_ids, timestamp=ev["ts"])

    def get_search(self, search_id: str) -> StoredSearch:
        with self._lock:
            if search_id not in self._searches:
                raise UnknownSearch(search_id)
            return self._searches[search_id]

    def get_results(self, search_id: str, offset: int = 0,
                    limit: int | None = None) -> dict:
        search = self.get_search(search_id)
        if search.status is not SearchStatus.Done:
            raise SearchNotDone(search_id, search.status)
        stored = self.store.get_results(search_id)
        corpus = self.get_corpus(search.corpus_id)
        doc_ids = stored["doc_ids"]
        window = doc_ids[offset:] if limit is None else doc_ids[offset:offset + limit]
        rows = []
        for doc_id in window:
            doc = corpus.get(doc_id)
            rows.append({
                "doc_id": doc_id,
                "text": doc.text if doc is not None else "",
                "rationale": stored["rationales"].get(doc_id),
            })
        return {
            "search_id": search_id,
            "total": len(doc_ids),
            "offset": offset,
            "rows": rows,
            "skipped": stored["skipped"],
        }

    def metrics(self, search_id: str, gold: GoldRelevance) -> dict:
        search = self.get_search(search_id)
        if search.status is not SearchStatus.Done:
            raise SearchNotDone(search_id, search.status)
        corpus = self.get_corpus(search.corpus_id)
        missing = sorted(set(corpus.ids()) - set(gold))
        if missing:
            raise GoldCoverageGap(missing)
        stored = self.store.get_results(search_id)
        counts = confusion(stored["doc_ids"], gold)
        row = prf(counts, label=search_id)
        return {
            "search_id": search_id,
            "precision": row.precision,
            "recall": row.recall,
            "f1": row.f1,
            "tp": counts.tp,
            "fp": counts.fp,
            "fn": counts.fn,
            "tn": counts.tn,
            "skipped": len(stored["skipped"]),
        }

    def list_backends(self) -> list[dict]:
        out = []
        for name in sorted(self.backends):
            cfg = self.config.backends[name]
            out.append({"name": name, "type": cfg.type,
                        "capabilities": sorted(self.backends[name].capabilities)})
        return out
