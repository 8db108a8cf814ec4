"""Single-directory durable store.

Layout under the store directory:

    corpora/{corpus_id}.dat   uploaded bytes, verbatim (atomic rename)
    results/{search_id}.json  completed search results (atomic rename)
    journal.log               append-only event journal, fsync per line

The journal is the source of truth for sessions and search lifecycles.
Each line is one JSON event. A result file is always renamed into place
before its "done" event is journaled, so replay never sees a Done search
without complete results. A truncated final journal line (a crash mid-
append) is tolerated and ignored; corruption anywhere else is an error.
"""

from __future__ import annotations

import json
import os
import threading
import time
from pathlib import Path

__all__ = ["Store", "StoreCorrupt"]


class StoreCorrupt(Exception):
    def __init__(self, where: str, reason: str):
        super().__init__(f"{where}: {reason}")
        self.where = where
        self.reason = reason


_EVENT_KINDS = frozenset({
    "corpus", "session", "search", "running", "done", "failed", "feedback",
})


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as f:
        f.write(data)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.corpora_dir = self.root / "corpora"
        self.results_dir = self.root / "results"
        self.journal_path = self.root / "journal.log"
        for d in (self.root, self.corpora_dir, self.results_dir):
            d.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._journal = open(self.journal_path, "a", encoding="utf-8")

    def close(self) -> None:
        with self._lock:
            self._journal.close()

    # -- journal ----------------------------------------------------------

    def append(self, event: str, **fields) -> dict:
        if event not in _EVENT_KINDS:
            raise ValueError(f"unknown event kind {event!r}")
        record = {"event": event, "ts": time.time(), **fields}
        line = json.dumps(record, ensure_ascii=False)
        with self._lock:
            self._journal.write(line + "\n")
            self._journal.flush()
            os.fsync(self._journal.fileno())
        return record

    def replay(self) -> list[dict]:
        """All journaled events in order. Only the final line may be
        damaged (an interrupted append); it is dropped silently.
        """
        events: list[dict] = []
        try:
            with open(self.journal_path, encoding="utf-8") as f:
                raw = f.read()
        except FileNotFoundError:
            return events
        lines = raw.split("\n")
        # split always leaves a final element: "" after a clean append,
        # otherwise whatever the interrupted write managed to get down
        tail = lines[-1]
        for i, line in enumerate(lines[:-1]):
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                raise StoreCorrupt(f"journal line {i + 1}",
                                   "unparseable event") from None
            if not isinstance(record, dict) or record.get("event") not in _EVENT_KINDS:
                raise StoreCorrupt(f"journal line {i + 1}", "unknown event shape")
            events.append(record)
        if tail:
            try:
                record = json.loads(tail)
            except json.JSONDecodeError:
                record = None  # interrupted append; drop it
            if isinstance(record, dict) and record.get("event") in _EVENT_KINDS:
                events.append(record)
        return events

    # -- corpora ----------------------------------------------------------

    def put_corpus(self, corpus_id: str, data: bytes) -> None:
        _atomic_write(self.corpora_dir / f"{corpus_id}.dat", data)

    def has_corpus(self, corpus_id: str) -> bool:
        return (self.corpora_dir / f"{corpus_id}.dat").exists()

    def get_corpus(self, corpus_id: str) -> bytes:
        path = self.corpora_dir / f"{corpus_id}.dat"
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise StoreCorrupt(f"corpus {corpus_id}",
                               "journaled corpus has no data file") from None

    # -- results ----------------------------------------------------------

    def put_results(self, search_id: str, payload: dict) -> None:
        data = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        _atomic_write(self.results_dir / f"{search_id}.json", data)

    def get_results(self, search_id: str) -> dict:
        path = self.results_dir / f"{search_id}.json"
        try:
            raw = path.read_bytes()
        except FileNotFoundError:
            raise StoreCorrupt(f"results {search_id}",
                               "done search has no results file") from None
        try:
            return json.loads(raw)
        except json.JSONDecodeError:
            raise StoreCorrupt(f"results {search_id}",
                               "results file is not valid JSON") from None
