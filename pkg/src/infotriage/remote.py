"""HTTP client for out-of-process classifier backends.

A remote backend is any server speaking the three-endpoint protocol:

    POST /v1/sentiment  {"text": ...}              -> {"label": ..., "scores"?}
    POST /v1/aspects    {"text": ..., "tokens": [...]} -> {"tags": [...]}
    POST /v1/stance     {"claim": ..., "text": ...}    -> {"label": ..., "scores"?}

Errors come back as HTTP 400 with {"error": reason}; anything else
non-200, or a malformed body, is a protocol violation.
"""

from __future__ import annotations

import json
import threading

import httpx

from .classify import (
    AspectTag,
    AspectTagging,
    ClassifierBackend,
    SentimentLabel,
    StanceLabel,
)
from .corpus import CleanDocument

__all__ = ["RemoteBackend", "ProtocolError", "BackendTimeout"]

DEFAULT_TIMEOUT = 30.0
DEFAULT_POOL_SIZE = 4


class ProtocolError(Exception):
    """The remote side violated the wire protocol or reported an error."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class BackendTimeout(Exception):
    def __init__(self, url: str, timeout: float):
        super().__init__(f"no response from {url} within {timeout}s")
        self.url = url
        self.timeout = timeout


def _label_from(value: object, enum_cls, what: str):
    if not isinstance(value, str):
        raise ProtocolError(f"{what} label must be a string, got {type(value).__name__}")
    try:
        return enum_cls(value)
    except ValueError:
        valid = ", ".join(m.value for m in enum_cls)
        raise ProtocolError(f"unknown {what} label {value!r} (expected one of: {valid})") from None


class RemoteBackend(ClassifierBackend):
    """Thread-safe client over a bounded connection pool."""

    def __init__(self, url: str, capabilities: frozenset[str] | set[str],
                 timeout: float = DEFAULT_TIMEOUT, pool_size: int = DEFAULT_POOL_SIZE,
                 name: str | None = None):
        if pool_size < 1:
            raise ValueError("pool_size must be >= 1")
        self.url = url.rstrip("/")
        self.capabilities = frozenset(capabilities)
        self.timeout = timeout
        self.name = name if name is not None else self.url
        limits = httpx.Limits(max_connections=pool_size,
                              max_keepalive_connections=pool_size)
        self._client = httpx.Client(timeout=timeout, limits=limits)
        self._lock = threading.Lock()
        self._closed = False

    def close(self) -> None:
        with self._lock:
            if not self._closed:
                self._client.close()
                self._closed = True

    def __enter__(self) -> "RemoteBackend":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def _post(self, endpoint: str, payload: dict) -> dict:
        url = f"{self.url}{endpoint}"
        try:
            response = self._client.post(url, json=payload)
        except httpx.TimeoutException:
            raise BackendTimeout(url, self.timeout) from None
        except httpx.HTTPError as exc:
            raise ProtocolError(f"request to {url} failed: {exc}") from None
        if response.status_code == 400:
            try:
                body = response.json()
                reason = body["error"]
            except (json.JSONDecodeError, KeyError, TypeError):
                reason = response.text
            raise ProtocolError(f"backend rejected request: {reason}", status=400)
        if response.status_code != 200:
            raise ProtocolError(
                f"unexpected status {response.status_code} from {url}",
                status=response.status_code,
            )
        try:
            body = response.json()
        except json.JSONDecodeError:
            raise ProtocolError(f"non-JSON response from {url}") from None
        if not isinstance(body, dict):
            raise ProtocolError(f"response from {url} must be a JSON object")
        return body

    def sentiment(self, doc: CleanDocument) -> SentimentLabel:
        self._require("sentiment")
        body = self._post("/v1/sentiment", {"text": doc.text})
        if "label" not in body:
            raise ProtocolError("sentiment response missing 'label'")
        return _label_from(body["label"], SentimentLabel, "sentiment")

    def aspects(self, doc: CleanDocument) -> AspectTagging:
        self._require("aspects")
        tokens = doc.text.split()
        body = self._post("/v1/aspects", {"text": doc.text, "tokens": tokens})
        if "tags" not in body:
            raise ProtocolError("aspects response missing 'tags'")
        raw = body["tags"]
        if not isinstance(raw, list):
            raise ProtocolError("'tags' must be a list")
        if len(raw) != len(tokens):
            raise ProtocolError(
                f"backend returned {len(raw)} tags for {len(tokens)} tokens")
        tags = [_label_from(t, AspectTag, "aspect") for t in raw]
        return AspectTagging.from_tags(tags, doc.text)

    def stance(self, claim: CleanDocument, doc: CleanDocument) -> StanceLabel:
        self._require("stance")
        body = self._post("/v1/stance", {"claim": claim.text, "text": doc.text})
        if "label" not in body:
            raise ProtocolError("stance response missing 'label'")
        return _label_from(body["label"], StanceLabel, "stance")
