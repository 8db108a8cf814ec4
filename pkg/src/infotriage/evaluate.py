"""Search-quality metrics and report emission.

Set precision/recall/F1 over document ids with the zero-true-positive
convention (no hits means all three scores are exactly 0.0), categorical
accuracy for label lists, exact-match entity-level scoring for aspect
spans, and a report runner that evaluates labeled query rows against gold
relevance and renders aligned text or CSV.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .classify import AspectSpan, AspectTag, ClassifierBackend, StanceLabel
from .corpus import Corpus
from .query import Query, SearchFailed, run_search

__all__ = [
    "ConfusionCounts",
    "MetricRow",
    "GoldRelevance",
    "Report",
    "ReportRow",
    "UnknownDocId",
    "LengthMismatch",
    "EmptyInput",
    "GoldError",
    "confusion",
    "prf",
    "categorical_accuracy",
    "exact_match_absa",
    "load_gold",
    "gold_from_corpus",
    "emit_report",
]

GoldRelevance = dict[str, bool]


class UnknownDocId(KeyError):
    def __init__(self, doc_id: str):
        super().__init__(doc_id)
        self.doc_id = doc_id


class LengthMismatch(ValueError):
    pass


class EmptyInput(ValueError):
    pass


class GoldError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int | None = None

    def __post_init__(self):
        for name in ("tp", "fp", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.tn is not None and self.tn < 0:
            raise ValueError("tn must be non-negative")


@dataclass(frozen=True)
class MetricRow:
    label: str
    precision: float
    recall: float
    f1: float


def confusion(predicted, gold: GoldRelevance) -> ConfusionCounts:
    """Count predicted ids against gold relevance; tn covers the rest of
    the gold domain. Every predicted id must be in the gold map.
    """
    pred = set(predicted)
    for doc_id in pred:
        if doc_id not in gold:
            raise UnknownDocId(doc_id)
    relevant = {d for d, r in gold.items() if r}
    tp = len(pred & relevant)
    fp = len(pred - relevant)
    fn = len(relevant - pred)
    tn = len(gold) - tp - fp - fn
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def prf(counts: ConfusionCounts, label: str = "") -> MetricRow:
    """Precision/recall/F1; zero true positives collapse all three to 0.0
    no matter what fp and fn are.
    """
    if counts.tp == 0:
        return MetricRow(label=label, precision=0.0, recall=0.0, f1=0.0)
    p = counts.tp / (counts.tp + counts.fp)
    r = counts.tp / (counts.tp + counts.fn)
    return MetricRow(label=label, precision=p, recall=r, f1=2 * p * r / (p + r))


def categorical_accuracy(predictions: list, golds: list) -> float:
    if len(predictions) != len(golds):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(golds)} gold labels")
    if not predictions:
        raise EmptyInput("cannot score an empty prediction list")
    hits = sum(1 for p, g in zip(predictions, golds) if p == g)
    return hits / len(predictions)


def _as_triples(entries) -> set[tuple[int, int, AspectTag]]:
    out = set()
    for entry in entries:
        if isinstance(entry, AspectSpan):
            out.add((entry.char_start, entry.char_end, entry.polarity))
        else:
            start, end, polarity = entry
            if not isinstance(polarity, AspectTag):
                polarity = AspectTag(polarity)
            out.add((int(start), int(end), polarity))
    return out


def exact_match_absa(pred, gold) -> ConfusionCounts:
    """Entity-level scoring: a prediction counts only when both the span
    boundaries and the polarity match a gold entry exactly.
    """
    pred_set = _as_triples(pred)
    gold_set = _as_triples(gold)
    tp = len(pred_set & gold_set)
    return ConfusionCounts(tp=tp, fp=len(pred_set) - tp, fn=len(gold_set) - tp)


def _relevance_of(value, target_stance: StanceLabel | None, where: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, dict):
        if "relevant" in value:
            if not isinstance(value["relevant"], bool):
                raise GoldError(f"{where}: 'relevant' must be a boolean")
            return value["relevant"]
        if "stance" in value:
            if target_stance is None:
                raise GoldError(
                    f"{where}: stance-form gold needs a declared target stance")
            try:
                stance = StanceLabel(value["stance"])
            except ValueError:
                raise GoldError(f"{where}: unknown stance {value['stance']!r}") from None
            return stance == target_stance
    raise GoldError(f"{where}: expected 'relevant' or 'stance'")


def load_gold(text: str, target_stance: StanceLabel | None = None) -> GoldRelevance:
    """Parse JSON Lines gold: {"doc_id", "relevant": bool} or
    {"doc_id", "stance": label} mapped through the declared target stance.
    """
    gold: GoldRelevance = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise GoldError(f"line {line_no}: invalid JSON: {exc}") from None
        if not isinstance(rec, dict) or "doc_id" not in rec:
            raise GoldError(f"line {line_no}: expected an object with 'doc_id'")
        doc_id = rec["doc_id"]
        if not isinstance(doc_id, str) or not doc_id:
            raise GoldError(f"line {line_no}: doc_id must be a non-empty string")
        if doc_id in gold:
            raise GoldError(f"line {line_no}: duplicate doc_id {doc_id!r}")
        payload = {k: v for k, v in rec.items() if k != "doc_id"}
        gold[doc_id] = _relevance_of(payload, target_stance, f"line {line_no}")
    return gold


def gold_from_corpus(corpus: Corpus,
                     target_stance: StanceLabel | None = None) -> GoldRelevance:
    """Normalize gold annotations embedded at ingest time."""
    gold: GoldRelevance = {}
    for doc_id, value in corpus.gold.items():
        gold[doc_id] = _relevance_of(value, target_stance, f"doc {doc_id!r}")
    return gold


@dataclass
class ReportRow:
    label: str
    metrics: MetricRow | None
    counts: ConfusionCounts | None
    skipped: int
    error: str | None = None


@dataclass
class Report:
    rows: list[ReportRow]

    def to_text(self) -> str:
        width = max([len(r.label) for r in self.rows] + [5])
        lines = [f"{'label':<{width}}  {'prec':>6}  {'rec':>6}  {'f1':>6}  "
                 f"{'tp':>4}  {'fp':>4}  {'fn':>4}  {'skip':>4}"]
        for row in self.rows:
            if row.error is not None:
                lines.append(f"{row.label:<{width}}  FAILED: {row.error}")
                continue
            m, c = row.metrics, row.counts
            lines.append(
                f"{row.label:<{width}}  {m.precision:>6.2f}  {m.recall:>6.2f}  "
                f"{m.f1:>6.2f}  {c.tp:>4}  {c.fp:>4}  {c.fn:>4}  {row.skipped:>4}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label", "precision", "recall", "f1",
                         "tp", "fp", "fn", "skipped"])
        for row in self.rows:
            if row.error is not None:
                writer.writerow([row.label, "", "", "", "", "", "", ""])
                continue
            m, c = row.metrics, row.counts
            writer.writerow([row.label, repr(m.precision), repr(m.recall),
                             repr(m.f1), c.tp, c.fp, c.fn, row.skipped])
        return buf.getvalue()


def emit_report(rows: list[tuple[str, Query]], corpus: Corpus,
                gold: GoldRelevance, backend: ClassifierBackend,
                parallelism: int | None = None) -> Report:
    """Run each labeled query and score it; a failed search still produces
    a row so the report shape matches the requested suite.
    """
    out: list[ReportRow] = []
    for label, query in rows:
        try:
            result = run_search(query, corpus, backend, parallelism=parallelism)
        except SearchFailed as exc:
            out.append(ReportRow(label=label, metrics=None, counts=None,
                                 skipped=0, error=str(exc)))
            continue
        counts = confusion(result.doc_ids, gold)
        out.append(ReportRow(label=label, metrics=prf(counts, label=label),
                             counts=counts, skipped=len(result.skipped)))
    return Report(rows=out)
