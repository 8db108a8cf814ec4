"""Document ingestion and text cleaning.

Every search in the engine runs over cleaned, lowercased documents. The
cleaning pass strips URLs, emoji, and anything outside a fixed retained
character set, while keeping hashtags and @-handles intact and recording
a character map back into the raw text so match spans can be projected
onto the original for display.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
import unicodedata
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Iterable

__all__ = [
    "RawDocument",
    "CleanDocument",
    "Corpus",
    "IngestError",
    "MalformedRecord",
    "DuplicateId",
    "clean_text",
    "ingest",
    "ingest_bytes",
    "as_document",
    "token_spans",
]

# Characters that survive cleaning (besides the space handled separately).
RETAINED_CHARS = frozenset("abcdefghijklmnopqrstuvwxyz0123456789#@'-.,!?%$&/():;")

# Maximal non-whitespace runs prefixed by a URL scheme or "www.".
_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)

_TOKEN_RE = re.compile(r"\S+")


class IngestError(Exception):
    """Base class for ingestion failures."""


class MalformedRecord(IngestError):
    def __init__(self, line_no: int, reason: str = "unparseable record"):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class DuplicateId(IngestError):
    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        super().__init__(f"duplicate document id {doc_id!r}")


@dataclass(frozen=True)
class RawDocument:
    id: str
    text: str
    source: str = ""
    timestamp: str | None = None


@dataclass(frozen=True)
class CleanDocument:
    """A cleaned, lowercased text unit.

    char_map[i] is the index into the raw text of the character that
    produced cleaned character i; it is strictly increasing.
    """

    id: str
    text: str
    char_map: tuple[int, ...]
    raw_text: str = ""

    def __post_init__(self) -> None:
        if len(self.char_map) != len(self.text):
            raise ValueError("char_map length must equal text length")


@dataclass
class Corpus:
    corpus_id: str
    documents: list[CleanDocument] = field(default_factory=list)
    created_at: str = ""
    # Optional gold annotations carried through from ingestion, keyed by doc id.
    gold: dict[str, Any] = field(default_factory=dict)
    _sealed: bool = False

    def seal(self) -> "Corpus":
        self._sealed = True
        return self

    @property
    def sealed(self) -> bool:
        return self._sealed

    def add(self, doc: CleanDocument) -> None:
        if self._sealed:
            raise ValueError("corpus is sealed")
        self.documents.append(doc)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def ids(self) -> list[str]:
        return [d.id for d in self.documents]

    def get(self, doc_id: str) -> CleanDocument | None:
        if not hasattr(self, "_by_id"):
            object.__setattr__(self, "_by_id", {d.id: d for d in self.documents})
        return self._by_id.get(doc_id)


def normalize_char(ch: str) -> str:
    """Normalize one raw character to its cleaned form.

    Returns "" when the character is dropped, " " for any whitespace, or a
    single retained character. NFKC first, then lowercase, then diacritics
    stripped via NFKD; anything that does not reduce to exactly one
    retained character is dropped.
    """
    n = unicodedata.normalize("NFKC", ch)
    if n.isspace():
        return " "
    n = n.lower()
    decomposed = unicodedata.normalize("NFKD", n)
    base = "".join(c for c in decomposed if not unicodedata.combining(c))
    if len(base) == 1 and base in RETAINED_CHARS:
        return base
    return ""


def _clean_pass(raw: str) -> tuple[str, list[int]]:
    removed = [False] * len(raw)
    for m in _URL_RE.finditer(raw):
        for i in range(m.start(), m.end()):
            removed[i] = True

    chars: list[str] = []
    cmap: list[int] = []
    pending_space: int | None = None
    for i, ch in enumerate(raw):
        if removed[i]:
            continue
        norm = normalize_char(ch)
        if not norm:
            continue
        if norm == " ":
            if pending_space is None:
                pending_space = i
            continue
        if pending_space is not None and chars:
            chars.append(" ")
            cmap.append(pending_space)
        pending_space = None
        chars.append(norm)
        cmap.append(i)
    return "".join(chars), cmap


def clean_text(raw: str) -> tuple[str, tuple[int, ...]]:
    """Clean raw text, returning (cleaned, char_map).

    Total function: lowercases, removes URLs and emoji, keeps only the
    retained character set, collapses whitespace runs, trims. Iterates to
    a fixed point so that character removal can never leave a new URL
    pattern behind (e.g. junk characters splitting "www.").
    """
    text, cmap = _clean_pass(raw)
    while True:
        text2, cmap2 = _clean_pass(text)
        if text2 == text:
            return text, tuple(cmap)
        # Compose the maps: cmap2 indexes into text, which indexes into raw.
        cmap = [cmap[j] for j in cmap2]
        text = text2


def as_document(text: str, doc_id: str = "") -> CleanDocument:
    """Clean arbitrary text into a standalone CleanDocument."""
    cleaned, cmap = clean_text(text)
    return CleanDocument(id=doc_id, text=cleaned, char_map=cmap, raw_text=text)


def token_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of the whitespace-delimited tokens of cleaned text."""
    return [(m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _digest_corpus_id(fmt: str, data: bytes) -> str:
    h = hashlib.sha256(fmt.encode("utf-8") + b"\x00" + data).hexdigest()
    return "c" + h[:16]


def _record_to_doc(rec: dict, line_no: int, seen: set[str]) -> tuple[CleanDocument, Any]:
    doc_id = rec.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise MalformedRecord(line_no, "missing or empty 'id' field")
    text = rec.get("text")
    if not isinstance(text, str):
        raise MalformedRecord(line_no, "missing 'text' field")
    if doc_id in seen:
        raise DuplicateId(doc_id)
    seen.add(doc_id)
    cleaned, cmap = clean_text(text)
    return CleanDocument(id=doc_id, text=cleaned, char_map=cmap, raw_text=text), rec.get("gold")


def _iter_jsonl(data: bytes) -> Iterable[tuple[int, dict]]:
    for line_no, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            raise MalformedRecord(line_no) from None
        if not isinstance(rec, dict):
            raise MalformedRecord(line_no, "record is not an object")
        yield line_no, rec


def _iter_csv(data: bytes) -> Iterable[tuple[int, dict]]:
    text = data.decode("utf-8-sig")
    if not text.strip():
        return
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return
    cols = [c.strip() for c in header]
    if "id" not in cols or "text" not in cols:
        raise MalformedRecord(1, "CSV header must declare 'id' and 'text' columns")
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) < len(cols):
            raise MalformedRecord(line_no, "row has fewer fields than header")
        yield line_no, dict(zip(cols, row))


def ingest_bytes(data: bytes, fmt: str) -> Corpus:
    """Build a sealed corpus from raw file bytes.

    The corpus id is a digest of (format, bytes), so re-ingesting identical
    content always produces the same id.
    """
    if fmt not in ("jsonl", "csv"):
        raise ValueError(f"unknown format {fmt!r}")
    try:
        records = _iter_jsonl(data) if fmt == "jsonl" else _iter_csv(data)
        corpus = Corpus(corpus_id=_digest_corpus_id(fmt, data), created_at=_now())
        seen: set[str] = set()
        for line_no, rec in records:
            doc, gold = _record_to_doc(rec, line_no, seen)
            corpus.add(doc)
            if gold is not None:
                corpus.gold[doc.id] = gold
    except UnicodeDecodeError:
        raise MalformedRecord(0, "file is not valid UTF-8") from None
    return corpus.seal()


def ingest(path: str, fmt: str) -> Corpus:
    """Ingest a JSON Lines or CSV file into a sealed corpus."""
    with open(path, "rb") as f:
        return ingest_bytes(f.read(), fmt)
