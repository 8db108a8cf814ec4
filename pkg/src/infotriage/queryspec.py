"""Canonical JSON form for queries, suites, and claim-template files.

The serializer is deliberately pinned down to the byte: two-space indent,
fixed key order, no ASCII escaping, trailing newline. Any client emitting
the same object shape (for instance JSON.stringify(obj, null, 2) in the
analyst console) produces identical files, so specs can be diffed and
checked into version control.
"""

from __future__ import annotations

import json

from .classify import AspectTag, SentimentLabel, StanceLabel
from .query import (
    AspectRequirement,
    ClaimTemplate,
    InvalidQuery,
    Keyword,
    KeywordExpr,
    MatchMode,
    NEGATION_PREFIX,
    Query,
    QueryKind,
)

__all__ = [
    "canonical_json",
    "query_to_obj",
    "query_from_obj",
    "serialize_query",
    "parse_query",
    "serialize_suite",
    "parse_suite",
    "serialize_templates",
    "parse_templates",
]

ANY_TAG = "any"


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _keyword_to_obj(kw: Keyword) -> dict:
    return {"pattern": kw.pattern, "mode": kw.mode.value}


def _expr_to_obj(expr: KeywordExpr) -> list:
    return [[_keyword_to_obj(kw) for kw in group] for group in expr.groups]


def query_to_obj(query: Query) -> dict:
    obj: dict = {"kind": query.kind.value}
    if query.keywords is not None:
        obj["keywords"] = _expr_to_obj(query.keywords)
    if query.target_sentiment is not None:
        obj["target_sentiment"] = query.target_sentiment.value
    if query.aspect_requirements:
        obj["aspect_requirements"] = [
            {
                "keywords": [_keyword_to_obj(kw) for kw in req.keywords],
                "tag": ANY_TAG if req.tag is None else req.tag.value,
            }
            for req in query.aspect_requirements
        ]
    if query.claim is not None:
        obj["claim"] = query.claim
    if query.target_stance is not None:
        obj["target_stance"] = query.target_stance.value
    return obj


def _require(obj: dict, what: str) -> None:
    if not isinstance(obj, dict):
        raise InvalidQuery(f"{what} must be a JSON object")


def _no_extras(obj: dict, allowed: set[str], what: str) -> None:
    extras = set(obj) - allowed
    if extras:
        raise InvalidQuery(f"unknown {what} fields: {sorted(extras)}")


def _keyword_from_obj(obj) -> Keyword:
    _require(obj, "keyword")
    _no_extras(obj, {"pattern", "mode"}, "keyword")
    if "pattern" not in obj:
        raise InvalidQuery("keyword missing 'pattern'")
    pattern = obj["pattern"]
    if not isinstance(pattern, str):
        raise InvalidQuery("keyword pattern must be a string")
    mode_raw = obj.get("mode", MatchMode.Substring.value)
    try:
        mode = MatchMode(mode_raw)
    except ValueError:
        raise InvalidQuery(f"unknown keyword mode {mode_raw!r}") from None
    return Keyword(pattern=pattern, mode=mode)


def _expr_from_obj(obj) -> KeywordExpr:
    if not isinstance(obj, list) or any(not isinstance(g, list) for g in obj):
        raise InvalidQuery("keywords must be a list of OR-groups")
    return KeywordExpr(tuple(
        tuple(_keyword_from_obj(kw) for kw in group) for group in obj
    ))


def _enum_from(value, enum_cls, what: str):
    try:
        return enum_cls(value)
    except ValueError:
        valid = ", ".join(m.value for m in enum_cls)
        raise InvalidQuery(f"unknown {what} {value!r} (expected: {valid})") from None


def query_from_obj(obj) -> Query:
    _require(obj, "query")
    _no_extras(obj, {"kind", "keywords", "target_sentiment",
                     "aspect_requirements", "claim", "target_stance"}, "query")
    if "kind" not in obj:
        raise InvalidQuery("query missing 'kind'")
    kind = _enum_from(obj["kind"], QueryKind, "query kind")

    keywords = None
    if "keywords" in obj:
        keywords = _expr_from_obj(obj["keywords"])

    target_sentiment = None
    if "target_sentiment" in obj:
        target_sentiment = _enum_from(obj["target_sentiment"], SentimentLabel,
                                      "sentiment label")

    requirements: tuple[AspectRequirement, ...] = ()
    if "aspect_requirements" in obj:
        raw = obj["aspect_requirements"]
        if not isinstance(raw, list):
            raise InvalidQuery("aspect_requirements must be a list")
        reqs = []
        for entry in raw:
            _require(entry, "aspect requirement")
            _no_extras(entry, {"keywords", "tag"}, "aspect requirement")
            if "keywords" not in entry or "tag" not in entry:
                raise InvalidQuery("aspect requirement needs 'keywords' and 'tag'")
            kws = entry["keywords"]
            if not isinstance(kws, list):
                raise InvalidQuery("aspect requirement keywords must be a list")
            tag = None if entry["tag"] == ANY_TAG else _enum_from(
                entry["tag"], AspectTag, "aspect tag")
            reqs.append(AspectRequirement(
                keywords=tuple(_keyword_from_obj(kw) for kw in kws), tag=tag))
        requirements = tuple(reqs)

    claim = obj.get("claim")
    if claim is not None and not isinstance(claim, str):
        raise InvalidQuery("claim must be a string")

    target_stance = None
    if "target_stance" in obj:
        target_stance = _enum_from(obj["target_stance"], StanceLabel, "stance label")

    return Query(kind=kind, keywords=keywords, target_sentiment=target_sentiment,
                 aspect_requirements=requirements, claim=claim,
                 target_stance=target_stance)


def serialize_query(query: Query) -> str:
    return canonical_json(query_to_obj(query))


def parse_query(text: str) -> Query:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidQuery(f"query spec is not valid JSON: {exc}") from None
    return query_from_obj(obj)


def serialize_suite(rows: list[tuple[str, Query]]) -> str:
    """A suite is a labeled list of queries, one report row each."""
    return canonical_json({
        "rows": [{"label": label, "query": query_to_obj(q)} for label, q in rows]
    })


def parse_suite(text: str) -> list[tuple[str, Query]]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidQuery(f"suite is not valid JSON: {exc}") from None
    _require(obj, "suite")
    _no_extras(obj, {"rows"}, "suite")
    if not isinstance(obj.get("rows"), list):
        raise InvalidQuery("suite needs a 'rows' list")
    rows = []
    for entry in obj["rows"]:
        _require(entry, "suite row")
        _no_extras(entry, {"label", "query"}, "suite row")
        if "label" not in entry or "query" not in entry:
            raise InvalidQuery("suite row needs 'label' and 'query'")
        if not isinstance(entry["label"], str):
            raise InvalidQuery("suite row label must be a string")
        rows.append((entry["label"], query_from_obj(entry["query"])))
    return rows


def serialize_templates(templates: list[ClaimTemplate],
                        negation_prefix: str = NEGATION_PREFIX) -> str:
    obj: dict = {}
    if negation_prefix != NEGATION_PREFIX:
        obj["negation_prefix"] = negation_prefix
    obj["templates"] = [
        {"pattern": t.pattern, "bindings": {k: list(v) for k, v in t.bindings.items()}}
        for t in templates
    ]
    return canonical_json(obj)


def parse_templates(text: str) -> list[ClaimTemplate]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidQuery(f"template file is not valid JSON: {exc}") from None
    _require(obj, "template file")
    _no_extras(obj, {"negation_prefix", "templates"}, "template file")
    prefix = obj.get("negation_prefix", NEGATION_PREFIX)
    if not isinstance(prefix, str):
        raise InvalidQuery("negation_prefix must be a string")
    raw = obj.get("templates")
    if not isinstance(raw, list):
        raise InvalidQuery("template file needs a 'templates' list")
    templates = []
    for entry in raw:
        _require(entry, "template")
        _no_extras(entry, {"pattern", "bindings"}, "template")
        if "pattern" not in entry:
            raise InvalidQuery("template missing 'pattern'")
        if not isinstance(entry["pattern"], str):
            raise InvalidQuery("template pattern must be a string")
        bindings = entry.get("bindings", {})
        if not isinstance(bindings, dict) or any(
            not isinstance(v, list) or any(not isinstance(s, str) for s in v)
            for v in bindings.values()
        ):
            raise InvalidQuery("bindings must map names to string lists")
        templates.append(ClaimTemplate(pattern=entry["pattern"],
                                       bindings={k: list(v) for k, v in bindings.items()},
                                       negation_prefix=prefix))
    return templates
