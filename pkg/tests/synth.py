"""Synthetic stand-in source files with the documented source sizes.

Every generator is deterministic and writes plain files, so dataset
recipe tests can assert exact class counts without the real corpora.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

# fine-grained tree labels chosen so the collapsed classes come out at
# 4980 positive / 2226 neutral / 4649 negative, totalling 11855
SST_FINE = {0: 2324, 1: 2325, 2: 2226, 3: 2490, 4: 2490}

STAR_OF = {"positive": 5, "neutral": 3, "negative": 1}


def _interleave(counts: dict) -> list:
    """Round-robin the classes so file order mixes them."""
    remaining = dict(counts)
    order = list(counts)
    out = []
    while any(remaining[c] > 0 for c in order):
        for c in order:
            if remaining[c] > 0:
                out.append(c)
                remaining[c] -= 1
    return out


def write_sst(path: Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for i, label in enumerate(_interleave(SST_FINE)):
            f.write(f"({label} ({label} tree{i}) ({label} sample{i}))\n")


def write_star_csv(path: Path, counts: dict) -> None:
    """counts maps class name -> rows; every class maps to one star value."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        for i, cls in enumerate(_interleave(counts)):
            text = f"review {i}, a {cls} one" if i % 7 == 0 else f"review {i} {cls}"
            writer.writerow([STAR_OF[cls], text])


def write_sa_sources(root: Path) -> dict:
    root.mkdir(parents=True, exist_ok=True)
    write_sst(root / "sst.txt")
    # test splits feed training; quotas are 1676/3054/1842 (+1 pos on yelp)
    write_star_csv(root / "amazon_test.csv",
                   {"positive": 1700, "neutral": 3100, "negative": 1900})
    write_star_csv(root / "yelp_test.csv",
                   {"positive": 1700, "neutral": 3100, "negative": 1900})
    # train splits feed validation; quotas are 333/334/333 per source
    write_star_csv(root / "amazon_train.csv",
                   {"positive": 400, "neutral": 400, "negative": 400})
    write_star_csv(root / "yelp_train.csv",
                   {"positive": 400, "neutral": 400, "negative": 400})
    return {
        "sst": str(root / "sst.txt"),
        "amazon_test": str(root / "amazon_test.csv"),
        "amazon_train": str(root / "amazon_train.csv"),
        "yelp_test": str(root / "yelp_test.csv"),
        "yelp_train": str(root / "yelp_train.csv"),
    }


_POLARITIES = ("positive", "negative", "neutral", "conflict")


def write_semeval_xml(path: Path, total: int) -> None:
    lines = ['<?xml version="1.0" encoding="UTF-8"?>', "<sentences>"]
    for i in range(total):
        prefix = f"item {i} mentions the "
        term = f"gadget{i % 11}"
        text = f"{prefix}{term} in passing"
        lines.append(f'  <sentence id="{i}">')
        lines.append(f"    <text>{text}</text>")
        if i % 5 != 4:  # one in five has no aspect terms
            polarity = _POLARITIES[i % len(_POLARITIES)]
            lines.append("    <aspectTerms>")
            lines.append(
                f'      <aspectTerm term="{term}" polarity="{polarity}" '
                f'from="{len(prefix)}" to="{len(prefix) + len(term)}"/>')
            lines.append("    </aspectTerms>")
        lines.append("  </sentence>")
    lines.append("</sentences>")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_absa_jsonl(path: Path, total: int, origin: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for i in range(total):
            prefix = f"{origin} post {i} rates the "
            term = f"unit{i % 7}"
            text = f"{prefix}{term} today"
            targets = []
            if i % 4 != 3:
                targets.append({"start": len(prefix),
                                "end": len(prefix) + len(term),
                                "polarity": ("positive", "negative",
                                             "neutral")[i % 3]})
            f.write(json.dumps({"text": text, "targets": targets}) + "\n")


def write_sentihood(path: Path, total: int, tag: str) -> None:
    items = []
    for i in range(total):
        if i % 9 == 8:
            text = f"{tag} note {i} compares LOCATION1 with LOCATION2 directly"
            opinions = [{"target_entity": "LOCATION1", "sentiment": "positive"},
                        {"target_entity": "LOCATION2", "sentiment": "negative"}]
        elif i % 9 == 7:
            # conflicting opinions on one entity collapse to neutral
            text = f"{tag} note {i} is torn about LOCATION1 overall"
            opinions = [{"target_entity": "LOCATION1", "sentiment": "positive"},
                        {"target_entity": "LOCATION1", "sentiment": "negative"}]
        elif i % 9 == 6:
            text = f"{tag} note {i} says nothing in particular"
            opinions = []
        else:
            text = f"{tag} note {i} likes living in LOCATION1 these days"
            opinions = [{"target_entity": "LOCATION1",
                         "sentiment": ("positive", "negative",
                                       "neutral")[i % 3]}]
        items.append({"text": text, "opinions": opinions})
    path.write_text(json.dumps(items), encoding="utf-8")


NAMES = [
    "arborfield", "bridgewater", "corwin", "danforth", "eastvale",
    "fernridge", "galloway", "harwick", "inverness", "jasperton",
    "kingsmere", "lakehurst", "mapleton", "northgate", "oakbank",
    "pinecrest", "queensland", "riverbend", "stonebridge", "thornbury",
    "upton mills", "valemount", "westlock", "yarrow", "zephyr cove",
]


def write_absa_sources(root: Path) -> dict:
    root.mkdir(parents=True, exist_ok=True)
    write_semeval_xml(root / "semeval14.xml", 9880)
    write_absa_jsonl(root / "negspec.jsonl", 2423, "negspec")
    write_semeval_xml(root / "mams.xml", 5297)
    write_absa_jsonl(root / "twitter.jsonl", 2358, "twitter")
    write_absa_jsonl(root / "yaso.jsonl", 1989, "yaso")
    write_sentihood(root / "sentihood_train.json", 2977, "train")
    write_sentihood(root / "sentihood_dev.json", 747, "dev")
    write_sentihood(root / "sentihood_test.json", 1491, "test")
    (root / "names.txt").write_text("\n".join(NAMES) + "\n", encoding="utf-8")
    return {
        "semeval14": str(root / "semeval14.xml"),
        "negspec": str(root / "negspec.jsonl"),
        "mams": str(root / "mams.xml"),
        "twitter": str(root / "twitter.jsonl"),
        "yaso": str(root / "yaso.jsonl"),
        "sentihood_train": str(root / "sentihood_train.json"),
        "sentihood_dev": str(root / "sentihood_dev.json"),
        "sentihood_test": str(root / "sentihood_test.json"),
        "names": str(root / "names.txt"),
    }


def write_stance_csvs(root: Path, prefix: str, counts: dict) -> tuple[str, str]:
    bodies_path = root / f"{prefix}_bodies.csv"
    stances_path = root / f"{prefix}_stances.csv"
    n_bodies = 50
    with open(bodies_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["Body ID", "articleBody"])
        for b in range(n_bodies):
            writer.writerow([b, f"{prefix} article body {b} text"])
    with open(stances_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["Headline", "Body ID", "Stance"])
        for i, cls in enumerate(_interleave(counts)):
            writer.writerow([f"{prefix} headline {i}", i % n_bodies, cls])
    return str(stances_path), str(bodies_path)


def write_perspectrum(path: Path, counts: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for i, cls in enumerate(_interleave(counts)):
            f.write(json.dumps({"claim": f"perspective claim {i}",
                                "body": f"perspective body {i}",
                                "label": cls}) + "\n")


def write_sd_sources(root: Path) -> dict:
    root.mkdir(parents=True, exist_ok=True)
    fnc_train = write_stance_csvs(root, "fnc_train", {
        "agree": 3678, "disagree": 840, "discuss": 5400, "unrelated": 3200})
    fnc_test = write_stance_csvs(root, "fnc_test", {
        "agree": 600, "disagree": 600, "discuss": 600, "unrelated": 600})
    arc = write_stance_csvs(root, "arc", {
        "agree": 1257, "disagree": 1402, "discuss": 904, "unrelated": 3300})
    write_perspectrum(root / "perspectrum.jsonl",
                      {"agree": 1400, "disagree": 4100})
    return {
        "fnc_train": {"stances": fnc_train[0], "bodies": fnc_train[1]},
        "fnc_test": {"stances": fnc_test[0], "bodies": fnc_test[1]},
        "arc": {"stances": arc[0], "bodies": arc[1]},
        "perspectrum": str(root / "perspectrum.jsonl"),
    }


def sd_tuple_sources(manifest: dict) -> dict:
    """Convert the JSON-manifest shape to the (stances, bodies) tuples the
    module API takes."""
    out = {}
    for key, value in manifest.items():
        if isinstance(value, dict):
            out[key] = (value["stances"], value["bodies"])
        else:
            out[key] = value
    return out
