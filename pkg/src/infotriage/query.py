"""Query model and search execution.

A query couples a keyword expression (AND over OR-groups) with an optional
classifier condition: document sentiment, per-token aspect tags overlapping
the keyword occurrences, or stance toward a claim. Claim templates expand
variable patterns into claim batches. run_search applies the kind-specific
match rule across a corpus with bounded thread fan-out.
"""

from __future__ import annotations

import itertools
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from .classify import AspectTag, ClassifierBackend, SentimentLabel, StanceLabel
from .corpus import CleanDocument, Corpus, as_document, clean_text, token_spans

__all__ = [
    "MatchMode",
    "Keyword",
    "KeywordExpr",
    "ClaimTemplate",
    "QueryKind",
    "AspectRequirement",
    "Query",
    "MatchRationale",
    "FeedbackMark",
    "SearchSession",
    "SearchResult",
    "InvalidQuery",
    "UnboundVariable",
    "BackendCallError",
    "SearchFailed",
    "UnknownSession",
    "matches_keywords",
    "keyword_occurrences",
    "expand_claims",
    "match_sa",
    "match_absa",
    "match_sd",
    "run_search",
    "revise_session",
]

NEGATION_PREFIX = "It is not the case that"


class MatchMode(str, Enum):
    Substring = "substring"
    Token = "token"


class InvalidQuery(ValueError):
    pass


@dataclass(frozen=True)
class Keyword:
    pattern: str
    mode: MatchMode = MatchMode.Substring

    def __post_init__(self):
        if not self.pattern:
            raise InvalidQuery("keyword pattern must be non-empty")
        cleaned, _ = clean_text(self.pattern)
        if cleaned != self.pattern:
            raise InvalidQuery(
                f"keyword pattern {self.pattern!r} is not in cleaned form "
                f"(expected {cleaned!r})")


@dataclass(frozen=True)
class KeywordExpr:
    """Conjunction of OR-groups; an empty expression matches everything."""

    groups: tuple[tuple[Keyword, ...], ...] = ()

    def __post_init__(self):
        for group in self.groups:
            if not group:
                raise InvalidQuery("keyword OR-group must be non-empty")


def _is_word_char(ch: str) -> bool:
    return ch.isalnum()


def keyword_occurrences(keyword: Keyword, text: str) -> list[tuple[int, int]]:
    """All (start, end) occurrences; Token mode requires the occurrence to
    stand alone between non-alphanumeric characters or text boundaries.
    Overlapping occurrences are all reported.
    """
    spans: list[tuple[int, int]] = []
    pat = keyword.pattern
    i = text.find(pat)
    while i != -1:
        end = i + len(pat)
        if keyword.mode is MatchMode.Substring or (
            (i == 0 or not _is_word_char(text[i - 1]))
            and (end == len(text) or not _is_word_char(text[end]))
        ):
            spans.append((i, end))
        i = text.find(pat, i + 1)
    return spans


MatchSpan = tuple[int, int, str]  # char_start, char_end, pattern


def matches_keywords(expr: KeywordExpr, doc: CleanDocument) -> tuple[bool, list[MatchSpan]]:
    """True iff every group has at least one matching keyword. The spans
    cover every occurrence of every keyword that matched, in text order.
    """
    ok = True
    spans: list[MatchSpan] = []
    for group in expr.groups:
        group_hit = False
        for kw in group:
            occs = keyword_occurrences(kw, doc.text)
            if occs:
                group_hit = True
                spans.extend((s, e, kw.pattern) for s, e in occs)
        if not group_hit:
            ok = False
    spans.sort()
    return ok, spans


_VAR_RE = re.compile("⟨([^⟨⟩]*)⟩")


class UnboundVariable(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name


@dataclass(frozen=True)
class ClaimTemplate:
    pattern: str
    bindings: dict[str, list[str]] = field(default_factory=dict)
    negation_prefix: str = NEGATION_PREFIX

    def variables(self) -> list[str]:
        """Distinct variable names in first-appearance order."""
        seen: list[str] = []
        for m in _VAR_RE.finditer(self.pattern):
            if m.group(1) not in seen:
                seen.append(m.group(1))
        return seen


def _negate(claim: str, prefix: str) -> str:
    if not claim:
        return prefix
    return f"{prefix} {claim[0].lower()}{claim[1:]}"


def expand_claims(template: ClaimTemplate, negate: bool = False) -> list[str]:
    """Cross-product expansion; the first variable varies slowest, so
    bindings enumerate in the order an analyst would write them out.
    """
    names = template.variables()
    for name in names:
        if name not in template.bindings:
            raise UnboundVariable(name)
    claims: list[str] = []
    value_lists = [template.bindings[n] for n in names]
    for combo in itertools.product(*value_lists) if names else [()]:
        claim = template.pattern
        for name, value in zip(names, combo):
            claim = claim.replace(f"⟨{name}⟩", value)
        claims.append(_negate(claim, template.negation_prefix) if negate else claim)
    return claims


class QueryKind(str, Enum):
    KeywordOnly = "keyword_only"
    Sentiment = "sentiment"
    Aspect = "aspect"
    Stance = "stance"


@dataclass(frozen=True)
class AspectRequirement:
    """OR-group of keywords plus the tag at least one occurrence must carry.

    tag None means Any: keyword presence suffices. The Null tag ("O") never
    satisfies a Neutral requirement; neutral must be actively assigned.
    """

    keywords: tuple[Keyword, ...]
    tag: AspectTag | None = None

    def __post_init__(self):
        if not self.keywords:
            raise InvalidQuery("aspect requirement needs at least one keyword")


_STANCE_TARGETS = (StanceLabel.Agree, StanceLabel.Disagree)


@dataclass(frozen=True)
class Query:
    kind: QueryKind
    keywords: KeywordExpr | None = None
    target_sentiment: SentimentLabel | None = None
    aspect_requirements: tuple[AspectRequirement, ...] = ()
    claim: str | None = None
    target_stance: StanceLabel | None = None

    def __post_init__(self):
        k = self.kind
        if k is QueryKind.Stance:
            if not self.claim:
                raise InvalidQuery("stance query needs a claim")
            if self.target_stance not in _STANCE_TARGETS:
                raise InvalidQuery("stance target must be agree or disagree")
        else:
            if self.keywords is None:
                raise InvalidQuery(f"{k.value} query needs a keyword expression")
            if self.claim is not None or self.target_stance is not None:
                raise InvalidQuery(f"claim fields are not valid on a {k.value} query")
        if k is QueryKind.Sentiment:
            if self.target_sentiment is None:
                raise InvalidQuery("sentiment query needs a target sentiment")
        elif self.target_sentiment is not None:
            raise InvalidQuery(f"target_sentiment is not valid on a {k.value} query")
        if k is QueryKind.Aspect:
            if not self.aspect_requirements:
                raise InvalidQuery("aspect query needs at least one requirement")
            if all(r.tag is None for r in self.aspect_requirements):
                raise InvalidQuery("at least one aspect requirement must name a tag")
        elif self.aspect_requirements:
            raise InvalidQuery(f"aspect_requirements are not valid on a {k.value} query")


@dataclass(frozen=True)
class MatchRationale:
    doc_id: str
    matched_spans: tuple[MatchSpan, ...]
    classifier_output: str
    rule_fired: str

    def as_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "matched_spans": [list(s) for s in self.matched_spans],
            "classifier_output": self.classifier_output,
            "rule_fired": self.rule_fired,
        }


class BackendCallError(Exception):
    """A classifier call failed for one document."""

    def __init__(self, doc_id: str, cause: Exception):
        super().__init__(f"classifier call failed for document {doc_id!r}: {cause}")
        self.doc_id = doc_id
        self.cause = cause


def _call(doc_id: str, fn, *args):
    from .classify import UnsupportedCapability
    try:
        return fn(*args)
    except UnsupportedCapability:
        raise
    except Exception as exc:
        raise BackendCallError(doc_id, exc) from exc


def match_sa(query: Query, doc: CleanDocument,
             backend: ClassifierBackend) -> tuple[bool, MatchRationale]:
    ok, spans = matches_keywords(query.keywords, doc)
    if not ok:
        return False, MatchRationale(doc.id, tuple(spans), "", "keyword-miss")
    label = _call(doc.id, backend.sentiment, doc)
    matched = label == query.target_sentiment
    rule = "sentiment-match" if matched else "sentiment-mismatch"
    return matched, MatchRationale(doc.id, tuple(spans), label.value, rule)


def _tagging_summary(tagging) -> str:
    return ";".join(
        f"{s.polarity.value}@{s.char_start}-{s.char_end}" for s in tagging.spans
    )


def match_absa(query: Query, doc: CleanDocument,
               backend: ClassifierBackend) -> tuple[bool, MatchRationale]:
    ok, spans = matches_keywords(query.keywords, doc)
    if not ok:
        return False, MatchRationale(doc.id, tuple(spans), "", "keyword-miss")
    tagging = _call(doc.id, backend.aspects, doc)
    offsets = token_spans(doc.text)
    tags = tagging.tags
    for req in query.aspect_requirements:
        satisfied = False
        for kw in req.keywords:
            for start, end in keyword_occurrences(kw, doc.text):
                if req.tag is None:
                    satisfied = True
                    break
                for (ts, te), tag in zip(offsets, tags):
                    if ts < end and start < te and tag == req.tag:
                        satisfied = True
                        break
                if satisfied:
                    break
            if satisfied:
                break
        if not satisfied:
            return False, MatchRationale(doc.id, tuple(spans),
                                         _tagging_summary(tagging),
                                         "aspect-requirement-failed")
    return True, MatchRationale(doc.id, tuple(spans), _tagging_summary(tagging),
                                "aspect-requirements-met")


def match_sd(query: Query, doc: CleanDocument,
             backend: ClassifierBackend) -> tuple[bool, MatchRationale]:
    spans: list[MatchSpan] = []
    if query.keywords is not None:
        ok, spans = matches_keywords(query.keywords, doc)
        if not ok:
            return False, MatchRationale(doc.id, tuple(spans), "", "keyword-miss")
    label = _call(doc.id, backend.stance, as_document(query.claim), doc)
    matched = label == query.target_stance
    rule = "stance-match" if matched else "stance-mismatch"
    return matched, MatchRationale(doc.id, tuple(spans), label.value, rule)


def _match_keyword_only(query: Query, doc: CleanDocument,
                        backend: ClassifierBackend) -> tuple[bool, MatchRationale]:
    ok, spans = matches_keywords(query.keywords, doc)
    rule = "keyword-only" if ok else "keyword-miss"
    return ok, MatchRationale(doc.id, tuple(spans), "", rule)


_MATCH_FNS = {
    QueryKind.KeywordOnly: _match_keyword_only,
    QueryKind.Sentiment: match_sa,
    QueryKind.Aspect: match_absa,
    QueryKind.Stance: match_sd,
}


class SearchFailed(Exception):
    def __init__(self, failures: list[tuple[str, str]], attempted: int):
        super().__init__(
            f"{len(failures)} of {attempted} classifier calls failed "
            f"(over the 10% tolerance)")
        self.failures = failures
        self.attempted = attempted


class _CountingBackend(ClassifierBackend):
    """Pass-through wrapper that counts attempted classifier calls."""

    def __init__(self, inner: ClassifierBackend):
        self.inner = inner
        self.name = inner.name
        self.capabilities = inner.capabilities
        self.calls = 0
        import threading
        self._lock = threading.Lock()

    def _bump(self):
        with self._lock:
            self.calls += 1

    def sentiment(self, doc):
        self._bump()
        return self.inner.sentiment(doc)

    def aspects(self, doc):
        self._bump()
        return self.inner.aspects(doc)

    def stance(self, claim, doc):
        self._bump()
        return self.inner.stance(claim, doc)


@dataclass
class SearchResult:
    query: Query
    doc_ids: list[str]
    rationales: dict[str, MatchRationale]
    skipped: list[str]
    calls_attempted: int


FAILURE_TOLERANCE = 0.10


def run_search(query: Query, corpus: Corpus, backend: ClassifierBackend,
               parallelism: int | None = None) -> SearchResult:
    """Match every document, in parallel, and assemble hits in corpus order.

    Per-document classifier failures are tolerated up to 10% of attempted
    calls; the failed documents land in the skipped list. Beyond that the
    whole search fails.
    """
    if parallelism is None:
        parallelism = os.cpu_count() or 1
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    match_fn = _MATCH_FNS[query.kind]
    counting = _CountingBackend(backend)
    docs = corpus.documents
    outcomes: list[tuple[bool, MatchRationale] | None] = [None] * len(docs)
    failures: list[tuple[str, str]] = []

    def work(index: int):
        return match_fn(query, docs[index], counting)

    if docs:
        with ThreadPoolExecutor(max_workers=min(parallelism, len(docs))) as pool:
            futures = {pool.submit(work, i): i for i in range(len(docs))}
            for future in futures:
                i = futures[future]
                try:
                    outcomes[i] = future.result()
                except BackendCallError as exc:
                    failures.append((exc.doc_id, str(exc.cause)))

    attempted = counting.calls
    if attempted and len(failures) / attempted > FAILURE_TOLERANCE:
        raise SearchFailed(sorted(failures), attempted)

    doc_ids: list[str] = []
    rationales: dict[str, MatchRationale] = {}
    for doc, outcome in zip(docs, outcomes):
        if outcome is None:
            continue
        matched, rationale = outcome
        if matched:
            doc_ids.append(doc.id)
            rationales[doc.id] = rationale
    skipped = sorted(doc_id for doc_id, _ in failures)
    return SearchResult(query=query, doc_ids=doc_ids, rationales=rationales,
                        skipped=skipped, calls_attempted=attempted)


class FeedbackMark(str, Enum):
    Relevant = "relevant"
    Irrelevant = "irrelevant"
    Unmarked = "unmarked"


class UnknownSession(KeyError):
    def __init__(self, session_id: str):
        super().__init__(session_id)
        self.session_id = session_id


@dataclass
class HistoryEntry:
    query: Query
    result_ids: tuple[str, ...]
    timestamp: float


@dataclass
class SearchSession:
    """One analyst's iterative loop over a corpus.

    History only ever grows; feedback marks survive query revisions so an
    analyst can check earlier judgements against a refined search.
    """

    session_id: str
    corpus_id: str
    history: list[HistoryEntry] = field(default_factory=list)
    feedback: dict[str, FeedbackMark] = field(default_factory=dict)

    def record(self, query: Query, result_ids: list[str],
               timestamp: float | None = None) -> HistoryEntry:
        entry = HistoryEntry(query, tuple(result_ids),
                             time.time() if timestamp is None else timestamp)
        self.history.append(entry)
        return entry

    def mark(self, doc_id: str, mark: FeedbackMark) -> None:
        if mark is FeedbackMark.Unmarked:
            self.feedback.pop(doc_id, None)
        else:
            self.feedback[doc_id] = mark

    def mark_of(self, doc_id: str) -> FeedbackMark:
        return self.feedback.get(doc_id, FeedbackMark.Unmarked)


def revise_session(sessions: dict[str, SearchSession], session_id: str,
                   query: Query, result_ids: list[str],
                   timestamp: float | None = None) -> SearchSession:
    """Append a (query, result) pair to an existing session's history."""
    if session_id not in sessions:
        raise UnknownSession(session_id)
    session = sessions[session_id]
    session.record(query, result_ids, timestamp)
    return session
