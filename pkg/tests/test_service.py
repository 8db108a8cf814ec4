"""HTTP API surface: route matrix, error bodies, status codes."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from infotriage.config import BackendConfig, ServiceConfig
from infotriage.service import create_app

DOCS = [
    {"id": "a1", "text": "the vaccine is terrible and harmful", "gold": True},
    {"id": "a2", "text": "the vaccine works great", "gold": False},
    {"id": "a3", "text": "weather report for tuesday", "gold": False},
    {"id": "a4", "text": "terrible awful vaccine news", "gold": {"relevant": True}},
]
CORPUS_BYTES = ("\n".join(json.dumps(d) for d in DOCS) + "\n").encode("utf-8")

NEG_QUERY = {
    "kind": "sentiment",
    "keywords": [[{"pattern": "vaccine"}]],
    "target_sentiment": "negative",
}


def make_config(tmp_path, **kwargs) -> ServiceConfig:
    config = ServiceConfig()
    config.store_dir = str(tmp_path / "store")
    config.parallelism = 2
    for key, value in kwargs.items():
        setattr(config, key, value)
    return config


@pytest.fixture()
def client(tmp_path):
    app = create_app(make_config(tmp_path))
    with TestClient(app) as c:
        yield c


def upload(client, data=CORPUS_BYTES, fmt="jsonl"):
    return client.post("/corpora",
                       files={"file": ("docs.jsonl", data)},
                       data={"format": fmt})


def wait_status(client, search_id, timeout=15.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        view = client.get(f"/searches/{search_id}").json()
        if view["status"] in ("done", "failed"):
            return view
        time.sleep(0.01)
    raise AssertionError("search did not finish")


def start_session(client):
    corpus_id = upload(client).json()["corpus_id"]
    session = client.post("/sessions", json={"corpus_id": corpus_id}).json()
    return corpus_id, session["session_id"]


# ---------------------------------------------------------------- corpora

def test_upload_corpus(client):
    resp = upload(client)
    assert resp.status_code == 201
    body = resp.json()
    assert body["documents"] == 4
    assert body["format"] == "jsonl"
    assert body["created"] is True

    again = upload(client)
    assert again.status_code == 200
    assert again.json()["corpus_id"] == body["corpus_id"]
    assert again.json()["created"] is False


def test_corpus_meta_roundtrip(client):
    corpus_id = upload(client).json()["corpus_id"]
    resp = client.get(f"/corpora/{corpus_id}")
    assert resp.status_code == 200
    assert resp.json()["documents"] == 4


def test_unknown_corpus_is_404(client):
    resp = client.get("/corpora/nope")
    assert resp.status_code == 404
    assert "unknown corpus" in resp.json()["error"]


def test_bad_format_is_400(client):
    resp = upload(client, fmt="parquet")
    assert resp.status_code == 400
    assert "unknown corpus format" in resp.json()["error"]


def test_malformed_record_reports_line(client):
    bad = b'{"id": "a", "text": "ok"}\n{"id": "b"}\n'
    resp = upload(client, data=bad)
    assert resp.status_code == 400
    assert resp.json()["detail"]["line"] == 2


def test_duplicate_id_is_400(client):
    bad = b'{"id": "a", "text": "x"}\n{"id": "a", "text": "y"}\n'
    resp = upload(client, data=bad)
    assert resp.status_code == 400
    assert "duplicate" in resp.json()["error"]


def test_upload_limit_is_413(tmp_path):
    app = create_app(make_config(tmp_path, upload_limit_bytes=64))
    with TestClient(app) as client:
        resp = upload(client, data=b"x" * 100)
        assert resp.status_code == 413
        assert resp.json()["detail"]["limit_bytes"] == 64
        assert resp.json()["detail"]["got_bytes"] == 100


# ---------------------------------------------------------------- sessions

def test_create_and_get_session(client):
    corpus_id, session_id = start_session(client)
    resp = client.get(f"/sessions/{session_id}")
    assert resp.status_code == 200
    view = resp.json()
    assert view["corpus_id"] == corpus_id
    assert view["history"] == []
    assert view["feedback"] == {}


def test_session_for_unknown_corpus_is_404(client):
    resp = client.post("/sessions", json={"corpus_id": "nope"})
    assert resp.status_code == 404


def test_validation_error_body_shape(client):
    resp = client.post("/sessions", json={"corpse_id": "x"})
    assert resp.status_code == 422
    body = resp.json()
    assert body["error"] == "invalid request body"
    assert "errors" in body["detail"]


# ---------------------------------------------------------------- searches

def test_search_flow(client):
    _, session_id = start_session(client)
    resp = client.post(f"/sessions/{session_id}/searches",
                       json={"query": NEG_QUERY})
    assert resp.status_code == 202
    accepted = resp.json()
    assert accepted["status"] in ("pending", "running", "done")
    assert accepted["backend"] == "lexicon"
    # the echo is the canonical form: keyword modes are explicit
    assert accepted["query"] == {
        "kind": "sentiment",
        "keywords": [[{"pattern": "vaccine", "mode": "substring"}]],
        "target_sentiment": "negative",
    }

    view = wait_status(client, accepted["search_id"])
    assert view["status"] == "done"
    assert view["result_count"] == 2

    results = client.get(f"/searches/{accepted['search_id']}/results").json()
    assert results["total"] == 2
    assert [r["doc_id"] for r in results["rows"]] == ["a1", "a4"]
    assert results["rows"][0]["rationale"]["rule_fired"] == "sentiment-match"

    session = client.get(f"/sessions/{session_id}").json()
    assert len(session["history"]) == 1
    assert session["history"][0]["result_ids"] == ["a1", "a4"]


def test_results_pagination(client):
    _, session_id = start_session(client)
    query = {"kind": "keyword_only", "keywords": [[{"pattern": "vaccine"}]]}
    accepted = client.post(f"/sessions/{session_id}/searches",
                           json={"query": query}).json()
    wait_status(client, accepted["search_id"])
    resp = client.get(f"/searches/{accepted['search_id']}/results",
                      params={"offset": 1, "limit": 1})
    body = resp.json()
    assert body["total"] == 3
    assert [r["doc_id"] for r in body["rows"]] == ["a2"]

    bad = client.get(f"/searches/{accepted['search_id']}/results",
                     params={"offset": -1})
    assert bad.status_code == 422


def test_invalid_query_spec_is_422(client):
    _, session_id = start_session(client)
    resp = client.post(f"/sessions/{session_id}/searches",
                       json={"query": {"kind": "sentiment", "keywords": []}})
    assert resp.status_code == 422
    assert "invalid query spec" in resp.json()["error"]


def test_unknown_backend_is_404(client):
    _, session_id = start_session(client)
    resp = client.post(f"/sessions/{session_id}/searches",
                       json={"query": NEG_QUERY, "backend": "nope"})
    assert resp.status_code == 404


def test_search_on_unknown_session_is_404(client):
    resp = client.post("/sessions/ghost/searches", json={"query": NEG_QUERY})
    assert resp.status_code == 404


def test_capability_mismatch_is_422(tmp_path):
    config = make_config(tmp_path)
    config.backends = {
        "lexicon": BackendConfig(name="lexicon", type="lexicon"),
        "narrow": BackendConfig(name="narrow", type="remote",
                                url="http://127.0.0.1:1",
                                capabilities=("sentiment",)),
    }
    with TestClient(create_app(config)) as client:
        _, session_id = start_session(client)
        stance_query = {"kind": "stance", "claim": "vaccines are harmful",
                        "target_stance": "agree"}
        resp = client.post(f"/sessions/{session_id}/searches",
                           json={"query": stance_query, "backend": "narrow"})
        assert resp.status_code == 422
        assert resp.json()["detail"] == {"backend": "narrow",
                                         "capability": "stance"}


def test_results_for_failed_search_is_409(tmp_path):
    config = make_config(tmp_path)
    config.backends = {
        "lexicon": BackendConfig(name="lexicon", type="lexicon"),
        "dead": BackendConfig(name="dead", type="remote",
                              url="http://127.0.0.1:1", timeout=0.5),
    }
    with TestClient(create_app(config)) as client:
        _, session_id = start_session(client)
        accepted = client.post(f"/sessions/{session_id}/searches",
                               json={"query": NEG_QUERY, "backend": "dead"}).json()
        view = wait_status(client, accepted["search_id"], timeout=30.0)
        assert view["status"] == "failed"
        assert view["error"]
        resp = client.get(f"/searches/{accepted['search_id']}/results")
        assert resp.status_code == 409
        assert resp.json()["detail"]["status"] == "failed"


def test_unknown_search_is_404(client):
    assert client.get("/searches/ghost").status_code == 404
    assert client.get("/searches/ghost/results").status_code == 404


# ---------------------------------------------------------------- feedback

def test_feedback_cycle(client):
    _, session_id = start_session(client)
    resp = client.post(f"/sessions/{session_id}/feedback",
                       json={"doc_id": "a1", "mark": "relevant"})
    assert resp.status_code == 200
    assert resp.json()["feedback"] == {"a1": "relevant"}

    resp = client.post(f"/sessions/{session_id}/feedback",
                       json={"doc_id": "a1", "mark": "clear"})
    assert resp.json()["feedback"] == {}


def test_feedback_validation(client):
    _, session_id = start_session(client)
    resp = client.post(f"/sessions/{session_id}/feedback",
                       json={"doc_id": "a1", "mark": "love"})
    assert resp.status_code == 422
    resp = client.post(f"/sessions/{session_id}/feedback",
                       json={"doc_id": "zz", "mark": "relevant"})
    assert resp.status_code == 404


# ---------------------------------------------------------------- metrics

def run_neg_search(client, session_id):
    accepted = client.post(f"/sessions/{session_id}/searches",
                           json={"query": NEG_QUERY}).json()
    wait_status(client, accepted["search_id"])
    return accepted["search_id"]


def test_metrics_with_inline_gold(client):
    _, session_id = start_session(client)
    search_id = run_neg_search(client, session_id)
    gold = [{"doc_id": "a1", "relevant": True},
            {"doc_id": "a2", "relevant": False},
            {"doc_id": "a3", "relevant": False},
            {"doc_id": "a4", "relevant": True}]
    resp = client.post(f"/searches/{search_id}/metrics", json={"gold": gold})
    assert resp.status_code == 200
    body = resp.json()
    assert body["tp"] == 2 and body["fp"] == 0 and body["fn"] == 0
    assert body["f1"] == 1.0


def test_metrics_from_corpus_gold(client):
    _, session_id = start_session(client)
    search_id = run_neg_search(client, session_id)
    resp = client.post(f"/searches/{search_id}/metrics", json={})
    assert resp.status_code == 200
    assert resp.json()["f1"] == 1.0


def test_metrics_with_stance_gold(client):
    _, session_id = start_session(client)
    search_id = run_neg_search(client, session_id)
    gold = [{"doc_id": "a1", "stance": "agree"},
            {"doc_id": "a2", "stance": "disagree"},
            {"doc_id": "a3", "stance": "unrelated"},
            {"doc_id": "a4", "stance": "agree"}]
    resp = client.post(f"/searches/{search_id}/metrics",
                       json={"gold": gold, "target_stance": "agree"})
    assert resp.status_code == 200
    assert resp.json()["tp"] == 2

    no_target = client.post(f"/searches/{search_id}/metrics", json={"gold": gold})
    assert no_target.status_code == 422

    bad_target = client.post(f"/searches/{search_id}/metrics",
                             json={"gold": gold, "target_stance": "pro"})
    assert bad_target.status_code == 422


def test_metrics_gold_path(client, tmp_path):
    _, session_id = start_session(client)
    search_id = run_neg_search(client, session_id)
    gold_file = tmp_path / "gold.jsonl"
    gold_file.write_text(
        '\n'.join(json.dumps({"doc_id": d["id"], "relevant": bool(i % 2 == 0)})
                  for i, d in enumerate(DOCS)) + "\n",
        encoding="utf-8")
    resp = client.post(f"/searches/{search_id}/metrics",
                       json={"gold_path": str(gold_file)})
    assert resp.status_code == 200

    missing = client.post(f"/searches/{search_id}/metrics",
                          json={"gold_path": str(tmp_path / "nope.jsonl")})
    assert missing.status_code == 422


def test_metrics_coverage_gap(client):
    _, session_id = start_session(client)
    search_id = run_neg_search(client, session_id)
    resp = client.post(f"/searches/{search_id}/metrics",
                       json={"gold": [{"doc_id": "a1", "relevant": True}]})
    assert resp.status_code == 422
    assert resp.json()["detail"]["missing"] == ["a2", "a3", "a4"]


def test_metrics_before_done_is_409(client):
    _, session_id = start_session(client)
    accepted = client.post(f"/sessions/{session_id}/searches",
                           json={"query": NEG_QUERY}).json()
    resp = client.post(f"/searches/{accepted['search_id']}/metrics", json={})
    # the search may already be done on a fast machine; only a 409 or a
    # 200 with full metrics is legal
    assert resp.status_code in (200, 409)
    if resp.status_code == 409:
        assert resp.json()["detail"]["status"] in ("pending", "running")


# ---------------------------------------------------------------- misc

def test_list_backends(client):
    resp = client.get("/backends")
    assert resp.status_code == 200
    assert resp.json()["backends"][0]["name"] == "lexicon"


def test_cors_preflight(client):
    resp = client.options("/backends", headers={
        "Origin": "http://localhost:5173",
        "Access-Control-Request-Method": "GET",
    })
    assert resp.status_code == 200
    assert resp.headers["access-control-allow-origin"] == "*"
