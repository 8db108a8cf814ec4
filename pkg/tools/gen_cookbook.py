"""Generate the shipped cookbook query suites.

One-off helper; the JSON files under src/infotriage/data/cookbook/ are
committed, this script just regenerates them through the canonical
serializer so they stay byte-stable.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from infotriage.classify import AspectTag, SentimentLabel, StanceLabel
from infotriage.query import (
    AspectRequirement,
    ClaimTemplate,
    Keyword,
    KeywordExpr,
    MatchMode,
    Query,
    QueryKind,
)
from infotriage.queryspec import serialize_suite, serialize_templates

OUT = Path(__file__).resolve().parents[1] / "src" / "infotriage" / "data" / "cookbook"

Sub = MatchMode.Substring
Tok = MatchMode.Token


def kw(*groups: tuple) -> KeywordExpr:
    """Each group is (mode, pattern, pattern, ...)."""
    return KeywordExpr(tuple(
        tuple(Keyword(pattern=p, mode=mode) for p in pats)
        for mode, *pats in [(g[0], *g[1:]) for g in groups]
    ))


def k_row(expr: KeywordExpr) -> Query:
    return Query(kind=QueryKind.KeywordOnly, keywords=expr)


def sa_row(expr: KeywordExpr, label: SentimentLabel) -> Query:
    return Query(kind=QueryKind.Sentiment, keywords=expr, target_sentiment=label)


def absa_row(expr: KeywordExpr, patterns: tuple[str, ...], tag: AspectTag,
             mode: MatchMode = Tok) -> Query:
    req = AspectRequirement(
        keywords=tuple(Keyword(pattern=p, mode=mode) for p in patterns), tag=tag)
    return Query(kind=QueryKind.Aspect, keywords=expr, aspect_requirements=(req,))


def sd_row(claim: str, stance: StanceLabel,
           expr: KeywordExpr | None = None) -> Query:
    return Query(kind=QueryKind.Stance, keywords=expr, claim=claim,
                 target_stance=stance)


def candidate_suite(first: str, last: str, handle: str, full: str) -> str:
    names = (first, last, handle)
    expr = kw((Tok, *names))
    claims = [
        f"{full.split()[0]}",
        handle_raw(handle),
        f"{full.split()[0]} or {handle_raw(handle)}",
        f"I like {full.split()[0]}",
        f"I like {full.split()[0]} and {handle_raw(handle)}",
        f"I think {full.split()[0]} is the best candidate for president of the United States",
        f"I think {full.split()[0]} or {handle_raw(handle)} would be the best candidate for president of the United States",
    ]
    rows: list[tuple[str, Query]] = [("K", k_row(expr))]
    rows.append(("SA for", sa_row(expr, SentimentLabel.Positive)))
    rows.append(("SA against", sa_row(expr, SentimentLabel.Negative)))
    rows.append(("ABSA for", absa_row(expr, names, AspectTag.Positive)))
    rows.append(("ABSA against", absa_row(expr, names, AspectTag.Negative)))
    for i, claim in enumerate(claims, start=1):
        rows.append((f"SD for {i}", sd_row(claim, StanceLabel.Agree)))
    for i, claim in enumerate(claims, start=1):
        rows.append((f"SD against {i}", sd_row(claim, StanceLabel.Disagree)))
    return serialize_suite(rows)


def handle_raw(handle: str) -> str:
    # cleaned keyword is lowercase; claims keep the display casing
    return {"@hillaryclinton": "@HillaryClinton",
            "@realdonaldtrump": "@realDonaldTrump"}[handle]


def person_sentiment_suite(first: str, last: str, full: str) -> str:
    expr = kw((Tok, first, last))
    names = (first, last)
    claims = [full, f"I like {full}", f"I think {full} is the best"]
    rows: list[tuple[str, Query]] = [("K", k_row(expr))]
    rows.append(("SA positive", sa_row(expr, SentimentLabel.Positive)))
    rows.append(("SA negative", sa_row(expr, SentimentLabel.Negative)))
    rows.append(("ABSA positive", absa_row(expr, names, AspectTag.Positive)))
    rows.append(("ABSA negative", absa_row(expr, names, AspectTag.Negative)))
    for i, claim in enumerate(claims, start=1):
        rows.append((f"SD positive {i}", sd_row(claim, StanceLabel.Agree)))
    for i, claim in enumerate(claims, start=1):
        rows.append((f"SD negative {i}", sd_row(claim, StanceLabel.Disagree)))
    return serialize_suite(rows)


def covidcq_templates() -> str:
    drugs = ["hydroxychloroquine", "chloroquine"]
    viruses = ["COVID", "the coronavirus"]
    templates = [
        ClaimTemplate(pattern="⟨x⟩", bindings={"x": tuple(drugs)}),
        ClaimTemplate(pattern="⟨x⟩ is a cure for ⟨c⟩",
                      bindings={"x": tuple(drugs), "c": tuple(viruses)}),
        ClaimTemplate(
            pattern="Either hydroxychloroquine or chloroquine is a cure for ⟨c⟩",
            bindings={"c": tuple(viruses)}),
        ClaimTemplate(
            pattern="Either hydroxychloroquine or chloroquine is a cure for COVID or the coronavirus",
            bindings={}),
    ]
    return serialize_templates(templates)


def covidcq_suite() -> str:
    expr = kw((Sub, "chloroquine", "hydroxychloroquine"))
    claims = [
        "hydroxychloroquine",
        "chloroquine",
        "hydroxychloroquine is a cure for COVID",
        "hydroxychloroquine is a cure for the coronavirus",
        "chloroquine is a cure for COVID",
        "chloroquine is a cure for the coronavirus",
        "Either hydroxychloroquine or chloroquine is a cure for COVID",
        "Either hydroxychloroquine or chloroquine is a cure for the coronavirus",
        "Either hydroxychloroquine or chloroquine is a cure for COVID or the coronavirus",
    ]
    negated = ["It is not the case that " + c[0].lower() + c[1:] for c in claims]
    rows: list[tuple[str, Query]] = [("K", k_row(expr))]
    rows.append(("SA", sa_row(expr, SentimentLabel.Positive)))
    rows.append(("ABSA", absa_row(expr, ("chloroquine", "hydroxychloroquine"),
                                  AspectTag.Positive, mode=Sub)))
    for i, claim in enumerate(claims, start=1):
        rows.append((f"SD {i}", sd_row(claim, StanceLabel.Agree)))
    for i, claim in enumerate(negated, start=1):
        rows.append((f"SD neg {i}", sd_row(claim, StanceLabel.Agree)))
    return serialize_suite(rows)


COVID_OR = (Sub, "covid", "coronavirus")
COVID_PATS = ("covid", "coronavirus")


def misconception_suite(extra_groups: list[tuple],
                        sa_labels: list[SentimentLabel],
                        absa_targets: list[tuple[tuple[str, ...], AspectTag, MatchMode]],
                        sd_claims: list[str]) -> str:
    expr = kw(COVID_OR, *extra_groups)
    rows: list[tuple[str, Query]] = [("K", k_row(expr))]
    for i, label in enumerate(sa_labels, start=1):
        tag = f"SA {i}" if len(sa_labels) > 1 else "SA"
        rows.append((tag, sa_row(expr, label)))
    for i, (pats, tag, mode) in enumerate(absa_targets, start=1):
        name = f"ABSA {i}" if len(absa_targets) > 1 else "ABSA"
        rows.append((name, absa_row(expr, pats, tag, mode=mode)))
    for i, claim in enumerate(sd_claims, start=1):
        name = f"SD {i}" if len(sd_claims) > 1 else "SD"
        rows.append((name, sd_row(claim, StanceLabel.Agree)))
    return serialize_suite(rows)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    files = {
        "clinton.json": candidate_suite(
            "hillary", "clinton", "@hillaryclinton", "Hillary Clinton"),
        "trump.json": candidate_suite(
            "donald", "trump", "@realdonaldtrump", "Donald Trump"),
        "spears.json": person_sentiment_suite(
            "britney", "spears", "Britney Spears"),
        "carter.json": person_sentiment_suite("jimmy", "carter", "Jimmy Carter"),
        "covidcq.json": covidcq_templates(),
        "covidcq_suite.json": covidcq_suite(),
        "genetic_engineering.json": misconception_suite(
            [(Sub, "genetic"), (Sub, "engineer")],
            [SentimentLabel.Negative, SentimentLabel.Neutral],
            [(COVID_PATS, AspectTag.Negative, Sub),
             (COVID_PATS, AspectTag.Neutral, Sub)],
            ["Coronavirus is genetically engineered",
             "COVID is genetically engineered",
             "The COVID virus is genetically engineered"]),
        "cold_survival.json": misconception_suite(
            [(Tok, "cold")],
            [SentimentLabel.Negative, SentimentLabel.Neutral],
            [(COVID_PATS, AspectTag.Negative, Sub),
             (COVID_PATS, AspectTag.Neutral, Sub)],
            ["coronavirus can only survive in cold temperatures",
             "COVID can only survive in cold temperatures"]),
        "water_cure.json": misconception_suite(
            [(Tok, "water")],
            [SentimentLabel.Positive, SentimentLabel.Neutral],
            [(("water",), AspectTag.Positive, Tok),
             (("water",), AspectTag.Neutral, Tok),
             (COVID_PATS, AspectTag.Negative, Sub),
             (COVID_PATS, AspectTag.Neutral, Sub)],
            ["Drinking water can make you immune to the coronavirus",
             "Drinking water can make you immune to COVID",
             "Drinking water can make you immune to COVID and the coronavirus",
             "Drinking water can make you immune to COVID or the coronavirus"]),
        "garlic_cure.json": misconception_suite(
            [(Tok, "garlic")],
            [SentimentLabel.Positive, SentimentLabel.Neutral],
            [(("garlic",), AspectTag.Positive, Tok),
             (("garlic",), AspectTag.Neutral, Tok),
             (COVID_PATS, AspectTag.Negative, Sub),
             (COVID_PATS, AspectTag.Neutral, Sub)],
            ["Garlic prevents infection by the coronavirus",
             "Garlic prevents infection by COVID",
             "Garlic prevents infection by COVID and the coronavirus",
             "Garlic prevents infection by COVID or the coronavirus"]),
        "bioweapon.json": misconception_suite(
            [(Tok, "bioweapon")],
            [SentimentLabel.Negative, SentimentLabel.Neutral],
            [(("bioweapon",), AspectTag.Negative, Tok),
             (("bioweapon",), AspectTag.Neutral, Tok),
             (COVID_PATS, AspectTag.Negative, Sub),
             (COVID_PATS, AspectTag.Neutral, Sub)],
            ["COVID is a bioweapon", "coronavirus is a bioweapon"]),
        "five_g.json": misconception_suite(
            [(Tok, "5g")],
            [SentimentLabel.Negative],
            [(("5g",), AspectTag.Negative, Tok)],
            ["COVID is caused by 5G", "coronavirus is caused by 5G"]),
    }
    for name, text in files.items():
        (OUT / name).write_text(text, encoding="utf-8")
        print(f"wrote {name} ({len(text)} bytes)")


if __name__ == "__main__":
    main()
