import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from infotriage.classify import (
    AspectTag,
    SentimentLabel,
    StanceLabel,
    UnsupportedCapability,
)
from infotriage.corpus import as_document
from infotriage.remote import BackendTimeout, ProtocolError, RemoteBackend

ALL_CAPS = frozenset({"sentiment", "aspects", "stance"})


class StubBackendServer:
    """Scripted sidecar: each path maps to a callable(body) -> response.

    A handler returns (status, payload) where payload may be a dict
    (JSON-encoded), raw bytes, or the string "sleep:N" to stall.
    """

    def __init__(self):
        self.routes = {}
        self.requests = []
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length) or b"{}")
                outer.requests.append((self.path, body))
                handler = outer.routes.get(self.path)
                if handler is None:
                    self.send_response(404)
                    self.end_headers()
                    return
                status, payload = handler(body)
                if isinstance(payload, str) and payload.startswith("sleep:"):
                    time.sleep(float(payload.split(":")[1]))
                    status, payload = 200, {}
                data = (payload if isinstance(payload, bytes)
                        else json.dumps(payload).encode())
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever,
                                       daemon=True)
        self.thread.start()

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.server.server_port}"

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture()
def stub():
    server = StubBackendServer()
    yield server
    server.close()


def test_sentiment_decodes_label(stub):
    stub.routes["/v1/sentiment"] = lambda body: (200, {"label": "negative"})
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        assert backend.sentiment(as_document("Gloomy day")) == SentimentLabel.Negative
    path, body = stub.requests[0]
    assert path == "/v1/sentiment"
    assert body == {"text": "gloomy day"}


def test_sentiment_scores_are_optional(stub):
    stub.routes["/v1/sentiment"] = lambda body: (
        200, {"label": "positive", "scores": [0.7, 0.2, 0.1]})
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        assert backend.sentiment(as_document("x")) == SentimentLabel.Positive


def test_sentiment_unknown_label(stub):
    stub.routes["/v1/sentiment"] = lambda body: (200, {"label": "meh"})
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        with pytest.raises(ProtocolError, match="meh"):
            backend.sentiment(as_document("x"))


def test_sentiment_missing_label(stub):
    stub.routes["/v1/sentiment"] = lambda body: (200, {"scores": [1, 0, 0]})
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        with pytest.raises(ProtocolError, match="label"):
            backend.sentiment(as_document("x"))


def test_aspects_round_trip(stub):
    stub.routes["/v1/aspects"] = lambda body: (
        200, {"tags": ["O", "positive", "O"]})
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        tagging = backend.aspects(as_document("the widget works"))
    assert list(tagging.tags) == [AspectTag.Null, AspectTag.Positive,
                                  AspectTag.Null]
    path, body = stub.requests[0]
    assert body == {"text": "the widget works",
                    "tokens": ["the", "widget", "works"]}


def test_aspects_length_mismatch(stub):
    stub.routes["/v1/aspects"] = lambda body: (200, {"tags": ["O"]})
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        with pytest.raises(ProtocolError, match="1 tags for 3 tokens"):
            backend.aspects(as_document("one two three"))


def test_aspects_unknown_tag(stub):
    stub.routes["/v1/aspects"] = lambda body: (200, {"tags": ["B-LOC"]})
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        with pytest.raises(ProtocolError, match="B-LOC"):
            backend.aspects(as_document("word"))


def test_stance_decodes_label(stub):
    stub.routes["/v1/stance"] = lambda body: (200, {"label": "discuss"})
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        label = backend.stance(as_document("The Claim"), as_document("The Text"))
    assert label == StanceLabel.Discuss
    path, body = stub.requests[0]
    assert path == "/v1/stance"
    assert body == {"claim": "the claim", "text": "the text"}


def test_400_reports_backend_reason(stub):
    stub.routes["/v1/sentiment"] = lambda body: (400, {"error": "text too long"})
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        with pytest.raises(ProtocolError, match="text too long") as exc:
            backend.sentiment(as_document("x"))
    assert exc.value.status == 400


def test_other_status_is_protocol_error(stub):
    stub.routes["/v1/sentiment"] = lambda body: (503, {"error": "down"})
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        with pytest.raises(ProtocolError) as exc:
            backend.sentiment(as_document("x"))
    assert exc.value.status == 503


def test_non_json_body_is_protocol_error(stub):
    stub.routes["/v1/sentiment"] = lambda body: (200, b"<html>hello</html>")
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        with pytest.raises(ProtocolError, match="non-JSON"):
            backend.sentiment(as_document("x"))


def test_non_object_json_is_protocol_error(stub):
    stub.routes["/v1/sentiment"] = lambda body: (200, b'["positive"]')
    with RemoteBackend(stub.url, ALL_CAPS) as backend:
        with pytest.raises(ProtocolError, match="JSON object"):
            backend.sentiment(as_document("x"))


def test_timeout_raises_backend_timeout(stub):
    stub.routes["/v1/sentiment"] = lambda body: (200, "sleep:2")
    with RemoteBackend(stub.url, ALL_CAPS, timeout=0.2) as backend:
        with pytest.raises(BackendTimeout) as exc:
            backend.sentiment(as_document("x"))
    assert exc.value.timeout == 0.2


def test_connection_refused_is_protocol_error():
    with RemoteBackend("http://127.0.0.1:1", ALL_CAPS, timeout=0.5) as backend:
        with pytest.raises(ProtocolError):
            backend.sentiment(as_document("x"))


def test_capability_gating(stub):
    with RemoteBackend(stub.url, {"sentiment"}) as backend:
        with pytest.raises(UnsupportedCapability):
            backend.stance(as_document("a"), as_document("b"))
    assert stub.requests == []  # gated before any network traffic


def test_name_defaults_to_url(stub):
    backend = RemoteBackend(stub.url + "/", ALL_CAPS)
    assert backend.name == stub.url
    backend.close()
    backend.close()  # idempotent


def test_pool_size_validated():
    with pytest.raises(ValueError):
        RemoteBackend("http://x", ALL_CAPS, pool_size=0)
