"""Label spaces, classifier head geometry, and the lexicon baseline backend.

The neural sentiment/aspect/stance models live out-of-process behind the
HTTP wire protocol (see remote.py); this module defines the label
enumerations every backend must speak, the head-geometry arithmetic used
to verify classifier configurations, and a deterministic lexicon baseline
that makes the whole pipeline testable without any trained model.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from importlib import resources

from .corpus import CleanDocument, token_spans
from .tokenizer import ModelGeometry

__all__ = [
    "SentimentLabel",
    "StanceLabel",
    "AspectTag",
    "AspectSpan",
    "AspectTagging",
    "HeadGeometry",
    "TRAINING_RECIPE",
    "training_recipe_json",
    "ClassifierBackend",
    "LexiconBackend",
    "UnsupportedCapability",
    "softmax",
    "head_geometry",
    "lexicon_sentiment",
    "lexicon_aspects",
    "lexicon_stance",
    "load_lexicon",
    "default_lexicon",
    "default_stopwords",
    "tags_to_spans",
    "spans_to_tags",
]


class SentimentLabel(str, Enum):
    Positive = "positive"
    Neutral = "neutral"
    Negative = "negative"


class StanceLabel(str, Enum):
    Unrelated = "unrelated"
    Agree = "agree"
    Discuss = "discuss"
    Disagree = "disagree"


class AspectTag(str, Enum):
    Null = "O"
    Positive = "positive"
    Neutral = "neutral"
    Negative = "negative"


_POLARITY_TAGS = (AspectTag.Positive, AspectTag.Neutral, AspectTag.Negative)


@dataclass(frozen=True)
class AspectSpan:
    start_token: int
    end_token: int  # exclusive
    polarity: AspectTag
    char_start: int
    char_end: int


@dataclass(frozen=True)
class AspectTagging:
    """Per-token aspect tags plus the derived maximal-run spans."""

    tags: tuple[AspectTag, ...]
    spans: tuple[AspectSpan, ...]

    @classmethod
    def from_tags(cls, tags: list[AspectTag], text: str) -> "AspectTagging":
        return cls(tags=tuple(tags), spans=tuple(tags_to_spans(tags, text)))


def tags_to_spans(tags: list[AspectTag] | tuple[AspectTag, ...], text: str) -> list[AspectSpan]:
    """Derive spans as the maximal runs of identical non-Null tags."""
    spans: list[AspectSpan] = []
    offsets = token_spans(text)
    if len(offsets) != len(tags):
        raise ValueError(f"{len(tags)} tags for {len(offsets)} tokens")
    i = 0
    while i < len(tags):
        if tags[i] is AspectTag.Null:
            i += 1
            continue
        j = i
        while j < len(tags) and tags[j] == tags[i]:
            j += 1
        spans.append(AspectSpan(
            start_token=i,
            end_token=j,
            polarity=tags[i],
            char_start=offsets[i][0],
            char_end=offsets[j - 1][1],
        ))
        i = j
    return spans


def spans_to_tags(spans: list[AspectSpan] | tuple[AspectSpan, ...], n_tokens: int) -> list[AspectTag]:
    """Expand spans back to a per-token tag sequence (inverse of tags_to_spans)."""
    tags = [AspectTag.Null] * n_tokens
    for span in spans:
        for i in range(span.start_token, span.end_token):
            tags[i] = span.polarity
    return tags


@dataclass(frozen=True)
class HeadGeometry:
    kind: str  # "SA" | "SD" | "ABSA"
    input_dim: int
    output_nodes: int
    shared_across_tokens: bool

    @property
    def parameter_count(self) -> int:
        return self.output_nodes * (self.input_dim + 1)


def head_geometry(kind: str, geometry: ModelGeometry = ModelGeometry()) -> HeadGeometry:
    """Classifier head shapes over the flattened (or per-token) embedding.

    SA reads the full flattened embedding into 3 output nodes, SD into 4;
    ABSA applies one 4-node layer per token with parameters shared across
    all token positions.
    """
    if kind == "SA":
        return HeadGeometry("SA", geometry.flattened_dim, 3, shared_across_tokens=False)
    if kind == "SD":
        return HeadGeometry("SD", geometry.flattened_dim, 4, shared_across_tokens=False)
    if kind == "ABSA":
        return HeadGeometry("ABSA", geometry.embed_dim, 4, shared_across_tokens=True)
    raise ValueError(f"unknown head kind {kind!r}")


# Fixed training settings for the sidecar that actually fits the models.
TRAINING_RECIPE = {
    "optimizer": "adam",
    "learning_rate": 1e-5,
    "epochs": {"SA": 1, "SD": 1, "ABSA": 6},
    "restarts": 5,
    "selection": "max categorical accuracy on validation",
}


def training_recipe_json() -> str:
    return json.dumps(TRAINING_RECIPE, indent=2, sort_keys=True) + "\n"


def softmax(scores: list[float]) -> list[float]:
    """Numerically stable softmax (max subtraction); preserves argmax."""
    if len(scores) == 0:
        raise ValueError("softmax of empty vector")
    if any(not math.isfinite(x) for x in scores):
        raise ValueError("softmax input must be finite")
    peak = max(scores)
    exps = [math.exp(x - peak) for x in scores]
    total = sum(exps)
    return [e / total for e in exps]


class UnsupportedCapability(Exception):
    def __init__(self, backend: str, capability: str):
        super().__init__(f"backend {backend!r} does not support {capability!r}")
        self.backend = backend
        self.capability = capability


class ClassifierBackend:
    """Contract every backend realizes; calls outside `capabilities` raise."""

    name: str = "backend"
    capabilities: frozenset[str] = frozenset()

    def _require(self, capability: str) -> None:
        if capability not in self.capabilities:
            raise UnsupportedCapability(self.name, capability)

    def sentiment(self, doc: CleanDocument) -> SentimentLabel:
        raise NotImplementedError

    def aspects(self, doc: CleanDocument) -> AspectTagging:
        raise NotImplementedError

    def stance(self, claim: CleanDocument, doc: CleanDocument) -> StanceLabel:
        raise NotImplementedError


def load_lexicon(path: str) -> dict[str, int]:
    """Load a polarity lexicon: one 'word<TAB>{+1|-1}' entry per line."""
    lexicon: dict[str, int] = {}
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                word, value = line.split("\t")
                lexicon[word] = int(value)
            except ValueError:
                raise ValueError(f"{path}:{line_no}: bad lexicon entry {line!r}") from None
            if lexicon[word] not in (1, -1):
                raise ValueError(f"{path}:{line_no}: polarity must be +1 or -1")
    return lexicon


def _data_text(name: str) -> str:
    return resources.files("infotriage").joinpath("data", name).read_text(encoding="utf-8")


def default_lexicon() -> dict[str, int]:
    lexicon: dict[str, int] = {}
    for line in _data_text("lexicon.txt").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, value = line.split("\t")
        lexicon[word] = int(value)
    return lexicon


def default_stopwords() -> frozenset[str]:
    return frozenset(
        w for w in _data_text("stopwords.txt").split() if w
    )


def lexicon_sentiment(doc: CleanDocument, lexicon: dict[str, int]) -> SentimentLabel:
    """Sign of the summed polarity of lexicon words in the document."""
    total = sum(lexicon.get(tok, 0) for tok in doc.text.split())
    if total > 0:
        return SentimentLabel.Positive
    if total < 0:
        return SentimentLabel.Negative
    return SentimentLabel.Neutral


def lexicon_aspects(doc: CleanDocument, lexicon: dict[str, int], window: int = 3,
                    stopwords: frozenset[str] = frozenset()) -> AspectTagging:
    """Tag each non-lexicon, non-stopword token with the polarity of the
    nearest lexicon token within `window` positions (ties go to the earlier
    token); lexicon and stopword tokens themselves stay Null.
    """
    if window < 0:
        raise ValueError("window must be >= 0")
    tokens = doc.text.split()
    hits = [(i, lexicon[t]) for i, t in enumerate(tokens) if t in lexicon]
    tags: list[AspectTag] = []
    for i, tok in enumerate(tokens):
        if tok in lexicon or tok in stopwords:
            tags.append(AspectTag.Null)
            continue
        best: tuple[int, int] | None = None  # (distance, hit index)
        for j, polarity in hits:
            dist = abs(i - j)
            if dist <= window and (best is None or dist < best[0] or (dist == best[0] and j < best[1])):
                best = (dist, j)
                best_polarity = polarity
        if best is None:
            tags.append(AspectTag.Null)
        else:
            tags.append(AspectTag.Positive if best_polarity > 0 else AspectTag.Negative)
    return AspectTagging.from_tags(tags, doc.text)


def lexicon_stance(claim: CleanDocument, doc: CleanDocument, lexicon: dict[str, int],
                   theta_rel: float = 0.15, window: int = 3,
                   stopwords: frozenset[str] = frozenset()) -> StanceLabel:
    """Jaccard-gated polarity comparison.

    Texts whose non-stopword token sets overlap less than theta_rel are
    Unrelated; otherwise equal non-neutral sentiments Agree, opposite ones
    Disagree, and anything involving a neutral side is Discuss.
    """
    if not 0 <= theta_rel <= 1:
        raise ValueError("theta_rel must be in [0, 1]")
    a = {t for t in claim.text.split() if t not in stopwords}
    b = {t for t in doc.text.split() if t not in stopwords}
    union = a | b
    jaccard = len(a & b) / len(union) if union else 0.0
    if jaccard < theta_rel:
        return StanceLabel.Unrelated
    s_claim = lexicon_sentiment(claim, lexicon)
    s_doc = lexicon_sentiment(doc, lexicon)
    if SentimentLabel.Neutral in (s_claim, s_doc):
        return StanceLabel.Discuss
    return StanceLabel.Agree if s_claim == s_doc else StanceLabel.Disagree


class LexiconBackend(ClassifierBackend):
    """Deterministic baseline backend; pure, so safe to share across threads."""

    capabilities = frozenset({"sentiment", "aspects", "stance"})

    def __init__(self, lexicon: dict[str, int] | None = None, window: int = 3,
                 theta_rel: float = 0.15, stopwords: frozenset[str] | None = None,
                 name: str = "lexicon"):
        self.name = name
        self.lexicon = lexicon if lexicon is not None else default_lexicon()
        self.window = window
        self.theta_rel = theta_rel
        self.stopwords = stopwords if stopwords is not None else default_stopwords()

    def sentiment(self, doc: CleanDocument) -> SentimentLabel:
        self._require("sentiment")
        return lexicon_sentiment(doc, self.lexicon)

    def aspects(self, doc: CleanDocument) -> AspectTagging:
        self._require("aspects")
        return lexicon_aspects(doc, self.lexicon, self.window, self.stopwords)

    def stance(self, claim: CleanDocument, doc: CleanDocument) -> StanceLabel:
        self._require("stance")
        return lexicon_stance(claim, doc, self.lexicon, self.theta_rel, self.window,
                              self.stopwords)
