"""Deterministic training/validation dataset builders.

Three recipes assemble labeled items from upstream source files with
exact take-counts. Take rules come in two shapes: "all N of a class"
(count must match exactly) and "first N of a class" (file-order scan with
a quota). Builders verify every pinned count and raise rather than warn;
emitted items carry cleaned text with target spans remapped through the
cleaning char map.
"""

from __future__ import annotations

import json
import random
import re
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path

from . import adapters
from .adapters import MalformedSource
from .classify import AspectTag, SentimentLabel, StanceLabel
from .corpus import clean_text

__all__ = [
    "LabeledSentimentItem",
    "LabeledAspectItem",
    "LabeledStancePair",
    "OutOfRange",
    "EmptyNameList",
    "InsufficientExamples",
    "CountMismatch",
    "map_stars",
    "collapse_sst",
    "replace_placeholders",
    "build_sa_dataset",
    "build_absa_dataset",
    "build_sd_dataset",
    "write_sa_jsonl",
    "write_absa_jsonl",
    "write_sd_jsonl",
    "build_manifest",
]


class OutOfRange(ValueError):
    pass


class EmptyNameList(ValueError):
    pass


class InsufficientExamples(Exception):
    def __init__(self, source: str, cls: str, needed: int, found: int):
        super().__init__(
            f"{source}: needed {needed} {cls!r} examples, found only {found}")
        self.source = source
        self.cls = cls
        self.needed = needed
        self.found = found


class CountMismatch(Exception):
    def __init__(self, source: str, expected: int, found: int):
        super().__init__(f"{source}: expected {expected} items, found {found}")
        self.source = source
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class LabeledSentimentItem:
    text: str
    label: SentimentLabel
    origin: str


@dataclass(frozen=True)
class LabeledAspectItem:
    text: str
    targets: tuple[tuple[int, int, AspectTag], ...]
    origin: str

    def __post_init__(self):
        prev_end = 0
        for start, end, polarity in self.targets:
            if not 0 <= start < end <= len(self.text):
                raise ValueError(f"target {start}..{end} outside text")
            if start < prev_end:
                raise ValueError("targets overlap")
            if polarity is AspectTag.Null:
                raise ValueError("target polarity cannot be O")
            prev_end = end


@dataclass(frozen=True)
class LabeledStancePair:
    claim: str
    body: str
    label: StanceLabel
    origin: str


def map_stars(stars: int) -> SentimentLabel:
    if not 1 <= stars <= 5:
        raise OutOfRange(f"star rating {stars} outside 1..5")
    if stars <= 2:
        return SentimentLabel.Negative
    if stars == 3:
        return SentimentLabel.Neutral
    return SentimentLabel.Positive


def collapse_sst(label5: int) -> SentimentLabel:
    """Fold the 0..4 tree labels: 0,1 negative; 2 neutral; 3,4 positive."""
    if not 0 <= label5 <= 4:
        raise OutOfRange(f"5-way label {label5} outside 0..4")
    if label5 <= 1:
        return SentimentLabel.Negative
    if label5 == 2:
        return SentimentLabel.Neutral
    return SentimentLabel.Positive


_PLACEHOLDER_RE = re.compile(r"LOCATION\d+")


def _replace_with_spans(sentence: str, names: list[str], rng: random.Random):
    """Replace placeholders, returning the new text, the placeholder→name
    mapping, and the character span of every inserted name.
    """
    mapping: dict[str, str] = {}
    for m in _PLACEHOLDER_RE.finditer(sentence):
        token = m.group(0)
        if token not in mapping:
            mapping[token] = rng.choice(names)
    parts: list[str] = []
    spans: list[tuple[str, int, int]] = []
    length = 0
    cursor = 0
    for m in _PLACEHOLDER_RE.finditer(sentence):
        gap = sentence[cursor:m.start()]
        parts.append(gap)
        length += len(gap)
        name = mapping[m.group(0)]
        parts.append(name)
        spans.append((m.group(0), length, length + len(name)))
        length += len(name)
        cursor = m.end()
    parts.append(sentence[cursor:])
    return "".join(parts), mapping, spans


def replace_placeholders(sentence: str, names: list[str], seed: int) -> str:
    """Each distinct LOCATION placeholder gets one uniformly drawn name,
    assigned in first-appearance order and reused for repeat occurrences;
    draws are independent, so two placeholders may share a name.
    """
    if not names:
        raise EmptyNameList("placeholder replacement needs at least one name")
    text, _, _ = _replace_with_spans(sentence, names, random.Random(seed))
    return text


def _remap_span(char_map: tuple[int, ...], start: int, end: int) -> tuple[int, int]:
    return bisect_left(char_map, start), bisect_left(char_map, end)


def _clean_aspect_item(raw_text: str, targets, origin: str) -> LabeledAspectItem:
    cleaned, char_map = clean_text(raw_text)
    remapped = []
    for start, end, polarity in targets:
        lo, hi = _remap_span(char_map, start, end)
        if lo >= hi:
            raise MalformedSource(origin, f"target {start}..{end}",
                                  "span removed entirely by cleaning")
        remapped.append((lo, hi, polarity))
    remapped.sort()
    return LabeledAspectItem(text=cleaned, targets=tuple(remapped), origin=origin)


def _take_classes(rows, label_of, quotas: dict, exact: set, source: str):
    """One pass in file order. Classes in `exact` keep every row and must
    total their quota; the rest stop at the quota and need at least it.
    """
    kept = []
    counts = {cls: 0 for cls in quotas}
    for row in rows:
        cls = label_of(row)
        if cls not in quotas:
            continue
        if cls in exact or counts[cls] < quotas[cls]:
            kept.append(row)
            counts[cls] += 1
    for cls, quota in quotas.items():
        if cls in exact:
            if counts[cls] != quota:
                raise CountMismatch(f"{source} [{cls.value}]", quota, counts[cls])
        elif counts[cls] < quota:
            raise InsufficientExamples(source, cls.value, quota, counts[cls])
    return kept


def _load(src, loader):
    if isinstance(src, (str, Path)):
        return loader(src)
    return list(src)


SA_TRAIN_SIZE = 25000
SA_VAL_SIZE = 2000
SST_TOTAL = 11855
_SA_TEST_QUOTAS = {SentimentLabel.Positive: 1676, SentimentLabel.Neutral: 3054,
                   SentimentLabel.Negative: 1842}
_SA_VAL_QUOTAS = {SentimentLabel.Positive: 333, SentimentLabel.Negative: 333,
                  SentimentLabel.Neutral: 334}
_SA_TRAIN_CLASS = {SentimentLabel.Positive: 8333, SentimentLabel.Neutral: 8334,
                   SentimentLabel.Negative: 8333}


def _sa_items(rows, to_label, origin: str) -> list[LabeledSentimentItem]:
    return [LabeledSentimentItem(text=clean_text(text)[0],
                                 label=to_label(raw), origin=origin)
            for text, raw in rows]


def build_sa_dataset(sst, amazon_test, amazon_train, yelp_test, yelp_train):
    """Sentence-sentiment recipe: every tree-bank sentence plus per-class
    slices of two star-rating review sets; one extra positive review on
    the second set evens the totals. Returns (train, val).
    """
    sst_rows = _load(sst, adapters.load_sst)
    if len(sst_rows) != SST_TOTAL:
        raise CountMismatch("sst", SST_TOTAL, len(sst_rows))
    train = _sa_items(sst_rows, collapse_sst, "sst")

    for name, src, extra_pos in (("amazon_test", amazon_test, 0),
                                 ("yelp_test", yelp_test, 1)):
        rows = _load(src, adapters.load_star_csv)
        labeled = [(text, map_stars(stars)) for text, stars in rows]
        quotas = dict(_SA_TEST_QUOTAS)
        quotas[SentimentLabel.Positive] += extra_pos
        kept = _take_classes(labeled, lambda r: r[1], quotas, set(), name)
        train.extend(_sa_items(kept, lambda lab: lab, name.split("_")[0]))

    tallies = {cls: 0 for cls in _SA_TRAIN_CLASS}
    for item in train:
        tallies[item.label] += 1
    for cls, expected in _SA_TRAIN_CLASS.items():
        if tallies[cls] != expected:
            raise CountMismatch(f"sa train [{cls.value}]", expected, tallies[cls])
    if len(train) != SA_TRAIN_SIZE:
        raise CountMismatch("sa train", SA_TRAIN_SIZE, len(train))

    val: list[LabeledSentimentItem] = []
    for name, src in (("amazon_train", amazon_train), ("yelp_train", yelp_train)):
        rows = _load(src, adapters.load_star_csv)
        labeled = [(text, map_stars(stars)) for text, stars in rows]
        kept = _take_classes(labeled, lambda r: r[1], _SA_VAL_QUOTAS, set(), name)
        val.extend(_sa_items(kept, lambda lab: lab, name.split("_")[0]))
    if len(val) != SA_VAL_SIZE:
        raise CountMismatch("sa val", SA_VAL_SIZE, len(val))
    return train, val


ABSA_TRAIN_SIZE = 25000
ABSA_VAL_SIZE = 2162
ABSA_TOTAL = 27162
_ABSA_EXPECTED = (("semeval14", 9880), ("negspec", 2423), ("mams", 5297),
                  ("twitter", 2358), ("yaso", 1989))
SENTIHOOD_TOTAL = 5215
SENTIHOOD_HOLDOUT = 2238  # dev + test; the train/val cut lands 76 items into dev


def _sentihood_to_items(groups, names: list[str], seed: int):
    """Replace location placeholders and turn entity opinions into char
    spans. Every occurrence of an opinion's entity is tagged; an entity
    with conflicting opinions collapses to neutral.
    """
    items = []
    index = 0
    for origin, rows in groups:
        for text, opinions in rows:
            replaced, _, spans = _replace_with_spans(text, names,
                                                     random.Random(seed + index))
            index += 1
            polarity_by_entity: dict[str, AspectTag] = {}
            for entity, sentiment in opinions:
                prior = polarity_by_entity.get(entity)
                if prior is None:
                    polarity_by_entity[entity] = sentiment
                elif prior != sentiment:
                    polarity_by_entity[entity] = AspectTag.Neutral
            targets = []
            for entity, polarity in polarity_by_entity.items():
                entity_spans = [(s, e) for tok, s, e in spans if tok == entity]
                if not entity_spans:
                    raise MalformedSource(origin, f"entity {entity!r}",
                                          "no matching placeholder in text")
                targets.extend((s, e, polarity) for s, e in entity_spans)
            items.append(_clean_aspect_item(replaced, targets, "sentihood"))
    return items


def build_absa_dataset(semeval14, negspec, mams, twitter, yaso,
                       sentihood_train, sentihood_dev, sentihood_test,
                       names, seed: int):
    """Aspect recipe: six sources concatenated in a fixed order; the first
    25,000 items train and the tail (the neighbourhood corpus holdouts)
    validates. Returns (train, val).
    """
    name_list = _load(names, adapters.load_names)
    if not name_list:
        raise EmptyNameList("placeholder replacement needs at least one name")

    items: list[LabeledAspectItem] = []
    sources = ((semeval14, adapters.load_semeval_xml),
               (negspec, adapters.load_absa_jsonl),
               (mams, adapters.load_semeval_xml),
               (twitter, adapters.load_absa_jsonl),
               (yaso, adapters.load_absa_jsonl))
    for (src, loader), (origin, expected) in zip(sources, _ABSA_EXPECTED):
        rows = _load(src, loader)
        if len(rows) != expected:
            raise CountMismatch(origin, expected, len(rows))
        items.extend(_clean_aspect_item(text, targets, origin)
                     for text, targets in rows)

    sh_groups = [(name, _load(src, adapters.load_sentihood))
                 for name, src in (("sentihood_train", sentihood_train),
                                   ("sentihood_dev", sentihood_dev),
                                   ("sentihood_test", sentihood_test))]
    sh_total = sum(len(rows) for _, rows in sh_groups)
    if sh_total != SENTIHOOD_TOTAL:
        raise CountMismatch("sentihood", SENTIHOOD_TOTAL, sh_total)
    holdout = len(sh_groups[1][1]) + len(sh_groups[2][1])
    if holdout != SENTIHOOD_HOLDOUT:
        raise CountMismatch("sentihood dev+test", SENTIHOOD_HOLDOUT, holdout)
    items.extend(_sentihood_to_items(sh_groups, name_list, seed))

    if len(items) != ABSA_TOTAL:
        raise CountMismatch("absa total", ABSA_TOTAL, len(items))
    return items[:ABSA_TRAIN_SIZE], items[ABSA_TRAIN_SIZE:]


SD_TRAIN_SIZE = 25000
SD_VAL_SIZE = 2000
SD_CLASS_TOTAL = 6250
_A, _D, _X, _U = (StanceLabel.Agree, StanceLabel.Disagree,
                  StanceLabel.Discuss, StanceLabel.Unrelated)
_SD_RECIPE = (
    ("fnc_train", {_D: 840, _A: 3678, _X: 5346, _U: 3125}, {_D, _A}),
    ("arc", {_A: 1257, _D: 1402, _X: 904, _U: 3125}, {_A, _D, _X}),
    ("perspectrum", {_A: 1315, _D: 4008}, set()),
)
_SD_VAL_QUOTAS = {_A: 500, _D: 500, _X: 500, _U: 500}


def _load_stance(src, source_name: str):
    if isinstance(src, tuple) and len(src) == 2:
        return adapters.load_stance_csv(*src)
    if isinstance(src, (str, Path)):
        return adapters.load_stance_jsonl(src)
    return list(src)


def _sd_items(rows, origin: str) -> list[LabeledStancePair]:
    return [LabeledStancePair(claim=clean_text(claim)[0],
                              body=clean_text(body)[0],
                              label=label, origin=origin)
            for claim, body, label in rows]


def build_sd_dataset(fnc_train, fnc_test, arc, perspectrum):
    """Stance recipe: three pair sources with per-class take rules giving
    6,250 of each class; validation is the first 500 of each class from
    the held-out competition test split. Returns (train, val).
    """
    train: list[LabeledStancePair] = []
    by_source = ((fnc_train, "fnc_train"), (arc, "arc"),
                 (perspectrum, "perspectrum"))
    for (src, _), (name, quotas, exact) in zip(by_source, _SD_RECIPE):
        rows = _load_stance(src, name)
        kept = _take_classes(rows, lambda r: r[2], quotas, exact, name)
        train.extend(_sd_items(kept, name.split("_")[0]))

    tallies = {cls: 0 for cls in (_A, _D, _X, _U)}
    for pair in train:
        tallies[pair.label] += 1
    for cls, count in tallies.items():
        if count != SD_CLASS_TOTAL:
            raise CountMismatch(f"sd train [{cls.value}]", SD_CLASS_TOTAL, count)
    if len(train) != SD_TRAIN_SIZE:
        raise CountMismatch("sd train", SD_TRAIN_SIZE, len(train))

    val_rows = _load_stance(fnc_test, "fnc_test")
    kept = _take_classes(val_rows, lambda r: r[2], _SD_VAL_QUOTAS, set(), "fnc_test")
    val = _sd_items(kept, "fnc")
    if len(val) != SD_VAL_SIZE:
        raise CountMismatch("sd val", SD_VAL_SIZE, len(val))
    return train, val


def _write_jsonl(path, records) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


def write_sa_jsonl(items: list[LabeledSentimentItem], path) -> None:
    _write_jsonl(path, ({"text": i.text, "label": i.label.value} for i in items))


def write_absa_jsonl(items: list[LabeledAspectItem], path) -> None:
    _write_jsonl(path, (
        {"text": i.text,
         "targets": [{"start": s, "end": e, "polarity": p.value}
                     for s, e, p in i.targets]}
        for i in items))


def write_sd_jsonl(items: list[LabeledStancePair], path) -> None:
    _write_jsonl(path, ({"claim": i.claim, "body": i.body, "label": i.label.value}
                        for i in items))


def _split_counts(items, label_of):
    by_origin: dict[str, int] = {}
    by_label: dict[str, int] = {}
    for item in items:
        by_origin[item.origin] = by_origin.get(item.origin, 0) + 1
        key = label_of(item)
        by_label[key] = by_label.get(key, 0) + 1
    return {"total": len(items),
            "by_origin": dict(sorted(by_origin.items())),
            "by_label": dict(sorted(by_label.items()))}


def build_manifest(task: str, train, val, extra: dict | None = None) -> dict:
    """Audit record: per-split totals broken down by origin and label."""
    if task == "ABSA":
        def label_of(item):
            return f"{len(item.targets)} targets"
    elif task == "SA":
        def label_of(item):
            return item.label.value
    else:
        def label_of(item):
            return item.label.value
    manifest = {"task": task,
                "train": _split_counts(train, label_of),
                "val": _split_counts(val, label_of)}
    if extra:
        manifest.update(extra)
    return manifest
