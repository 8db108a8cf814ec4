"""Readers for the upstream dataset files the recipe builders consume.

Each loader reads one source's distributed format and yields plain tuples
in file order; the builders in datasets.py do all counting, cleaning, and
splitting. Formats handled here:

* Penn-treebank sentiment trees, one parenthesized tree per line with
  0..4 node labels (load_sst).
* Headerless star-rating CSV, ``class,[title,]text`` with class 1..5
  (load_star_csv); the last column is the review text.
* Aspect-term XML: ``<sentence><text>..</text><aspectTerms><aspectTerm
  term= polarity= from= to=/>..`` (load_semeval_xml).
* Neighbourhood-review JSON: one array of ``{"text", "opinions":
  [{"target_entity", "sentiment"}]}`` objects (load_sentihood).
* Normalized aspect JSONL ``{"text", "targets": [{"start", "end",
  "polarity"}]}`` for sources whose upstream formats were converted
  offline (load_absa_jsonl).
* Stance CSV pairs: a stances file ``Headline,Body ID,Stance`` joined to
  a bodies file ``Body ID,articleBody`` (load_stance_csv).
* Normalized stance JSONL ``{"claim", "body", "label"}``
  (load_stance_jsonl).
"""

from __future__ import annotations

import csv
import json
import re
import xml.etree.ElementTree as ET
from pathlib import Path

from .classify import AspectTag, StanceLabel

__all__ = [
    "MalformedSource",
    "load_sst",
    "load_star_csv",
    "load_semeval_xml",
    "load_sentihood",
    "load_absa_jsonl",
    "load_stance_csv",
    "load_stance_jsonl",
    "load_names",
]


class MalformedSource(ValueError):
    def __init__(self, source: str, where: str, reason: str):
        super().__init__(f"{source}: {where}: {reason}")
        self.source = source
        self.where = where
        self.reason = reason


_TREE_LEAF_RE = re.compile(r"\(\s*\d+\s+([^()]+?)\s*\)")
_TREE_ROOT_RE = re.compile(r"^\s*\(\s*(\d+)")


def load_sst(path: str | Path) -> list[tuple[str, int]]:
    """(sentence, root label 0..4) per tree line; leaves joined by spaces."""
    out: list[tuple[str, int]] = []
    src = str(path)
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            root = _TREE_ROOT_RE.match(line)
            if not root:
                raise MalformedSource(src, f"line {line_no}", "no root label")
            label = int(root.group(1))
            if label > 4:
                raise MalformedSource(src, f"line {line_no}",
                                      f"root label {label} out of range")
            leaves = _TREE_LEAF_RE.findall(line)
            if not leaves:
                raise MalformedSource(src, f"line {line_no}", "tree has no leaves")
            out.append((" ".join(leaves), label))
    return out


def load_star_csv(path: str | Path) -> list[tuple[str, int]]:
    """(review text, stars 1..5) from headerless class,[title,]text rows."""
    out: list[tuple[str, int]] = []
    src = str(path)
    with open(path, encoding="utf-8", newline="") as f:
        for row_no, row in enumerate(csv.reader(f), start=1):
            if not row:
                continue
            if len(row) < 2:
                raise MalformedSource(src, f"row {row_no}", "need class and text")
            try:
                stars = int(row[0])
            except ValueError:
                raise MalformedSource(src, f"row {row_no}",
                                      f"class {row[0]!r} is not an integer") from None
            if not 1 <= stars <= 5:
                raise MalformedSource(src, f"row {row_no}",
                                      f"class {stars} out of range 1..5")
            out.append((row[-1], stars))
    return out


_XML_POLARITY = {
    "positive": AspectTag.Positive,
    "neutral": AspectTag.Neutral,
    "negative": AspectTag.Negative,
    # rare mixed-sentiment terms; folded to neutral so item counts hold
    "conflict": AspectTag.Neutral,
}

AspectTargets = list[tuple[int, int, AspectTag]]


def load_semeval_xml(path: str | Path) -> list[tuple[str, AspectTargets]]:
    """(sentence text, [(from, to, polarity)]) per <sentence> element."""
    src = str(path)
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise MalformedSource(src, "document", f"XML parse error: {exc}") from None
    out: list[tuple[str, AspectTargets]] = []
    for sentence in root.iter("sentence"):
        where = f"sentence {sentence.get('id', '?')}"
        text_el = sentence.find("text")
        if text_el is None or text_el.text is None:
            raise MalformedSource(src, where, "missing <text>")
        text = text_el.text
        targets: AspectTargets = []
        for term in sentence.iter("aspectTerm"):
            polarity = term.get("polarity", "")
            if polarity not in _XML_POLARITY:
                raise MalformedSource(src, where, f"unknown polarity {polarity!r}")
            try:
                start = int(term.get("from", ""))
                end = int(term.get("to", ""))
            except ValueError:
                raise MalformedSource(src, where, "bad from/to offsets") from None
            if not 0 <= start < end <= len(text):
                raise MalformedSource(src, where,
                                      f"offsets {start}..{end} out of bounds")
            targets.append((start, end, _XML_POLARITY[polarity]))
        out.append((text, targets))
    return out


def load_sentihood(path: str | Path) -> list[tuple[str, list[tuple[str, AspectTag]]]]:
    """(text, [(target entity, sentiment)]) per item of the JSON array."""
    src = str(path)
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise MalformedSource(src, "document", f"JSON parse error: {exc}") from None
    if not isinstance(data, list):
        raise MalformedSource(src, "document", "expected a JSON array")
    out: list[tuple[str, list[tuple[str, AspectTag]]]] = []
    for i, item in enumerate(data):
        where = f"item {i}"
        if not isinstance(item, dict) or not isinstance(item.get("text"), str):
            raise MalformedSource(src, where, "expected an object with 'text'")
        opinions: list[tuple[str, AspectTag]] = []
        for op in item.get("opinions", []):
            entity = op.get("target_entity")
            sentiment = str(op.get("sentiment", "")).lower()
            if not isinstance(entity, str) or not entity:
                raise MalformedSource(src, where, "opinion missing target_entity")
            if sentiment not in ("positive", "negative", "neutral"):
                raise MalformedSource(src, where,
                                      f"unknown sentiment {op.get('sentiment')!r}")
            opinions.append((entity, AspectTag(sentiment)))
        out.append((item["text"], opinions))
    return out


def load_absa_jsonl(path: str | Path) -> list[tuple[str, AspectTargets]]:
    """Normalized aspect JSONL; offsets refer to the raw text field."""
    src = str(path)
    out: list[tuple[str, AspectTargets]] = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            where = f"line {line_no}"
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedSource(src, where, f"invalid JSON: {exc}") from None
            if not isinstance(rec, dict) or not isinstance(rec.get("text"), str):
                raise MalformedSource(src, where, "expected an object with 'text'")
            text = rec["text"]
            targets: AspectTargets = []
            for t in rec.get("targets", []):
                try:
                    start, end = int(t["start"]), int(t["end"])
                    polarity = AspectTag(t["polarity"])
                except (KeyError, TypeError, ValueError):
                    raise MalformedSource(src, where, f"bad target {t!r}") from None
                if polarity is AspectTag.Null:
                    raise MalformedSource(src, where, "target polarity cannot be O")
                if not 0 <= start < end <= len(text):
                    raise MalformedSource(src, where,
                                          f"offsets {start}..{end} out of bounds")
                targets.append((start, end, polarity))
            out.append((text, targets))
    return out


_STANCE_VALUES = {label.value for label in StanceLabel}


def load_stance_csv(stances_path: str | Path,
                    bodies_path: str | Path) -> list[tuple[str, str, StanceLabel]]:
    """(headline, body, stance) in stances-file order."""
    bsrc = str(bodies_path)
    bodies: dict[str, str] = {}
    with open(bodies_path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or "Body ID" not in reader.fieldnames \
                or "articleBody" not in reader.fieldnames:
            raise MalformedSource(bsrc, "header",
                                  "need 'Body ID' and 'articleBody' columns")
        for row_no, row in enumerate(reader, start=2):
            bodies[row["Body ID"]] = row["articleBody"]
    src = str(stances_path)
    out: list[tuple[str, str, StanceLabel]] = []
    with open(stances_path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        needed = {"Headline", "Body ID", "Stance"}
        if reader.fieldnames is None or not needed <= set(reader.fieldnames):
            raise MalformedSource(src, "header",
                                  "need 'Headline', 'Body ID', 'Stance' columns")
        for row_no, row in enumerate(reader, start=2):
            stance = row["Stance"].strip().lower()
            if stance not in _STANCE_VALUES:
                raise MalformedSource(src, f"row {row_no}",
                                      f"unknown stance {row['Stance']!r}")
            body_id = row["Body ID"]
            if body_id not in bodies:
                raise MalformedSource(src, f"row {row_no}",
                                      f"unknown body id {body_id!r}")
            out.append((row["Headline"], bodies[body_id], StanceLabel(stance)))
    return out


def load_stance_jsonl(path: str | Path) -> list[tuple[str, str, StanceLabel]]:
    """Normalized stance JSONL: {"claim", "body", "label"} per line."""
    src = str(path)
    out: list[tuple[str, str, StanceLabel]] = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            where = f"line {line_no}"
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedSource(src, where, f"invalid JSON: {exc}") from None
            if not isinstance(rec, dict):
                raise MalformedSource(src, where, "expected an object")
            claim, body, label = rec.get("claim"), rec.get("body"), rec.get("label")
            if not isinstance(claim, str) or not isinstance(body, str):
                raise MalformedSource(src, where, "'claim' and 'body' must be strings")
            if label not in _STANCE_VALUES:
                raise MalformedSource(src, where, f"unknown label {label!r}")
            out.append((claim, body, StanceLabel(label)))
    return out


def load_names(path: str | Path) -> list[str]:
    """One replacement name per line; blank lines ignored."""
    with open(path, encoding="utf-8") as f:
        names = [line.strip() for line in f]
    return [n for n in names if n]
