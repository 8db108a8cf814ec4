"""WordPiece tokenization and fixed-length sequence encoding.

Encodes cleaned text (or claim/text pairs) into 192-token id sequences
with [CLS]/[SEP] framing, zero padding, and segment markers, matching the
input geometry the neural classifier heads expect.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "Vocabulary",
    "TokenSequence",
    "ModelGeometry",
    "ClaimTooLong",
    "wordpiece",
    "encode_single",
    "encode_pair",
]

MAX_WORD_CHARS = 100  # longer words map straight to [UNK]


class ClaimTooLong(ValueError):
    """The claim alone fills the sequence, leaving no room for input text."""


@dataclass(frozen=True)
class ModelGeometry:
    max_tokens: int = 192
    embed_dim: int = 768

    @property
    def flattened_dim(self) -> int:
        return self.max_tokens * self.embed_dim


@dataclass
class Vocabulary:
    """Token list where list index is the token id; index 0 is the pad token."""

    tokens: list[str]
    unk_token: str = "[UNK]"
    cls_token: str = "[CLS]"
    sep_token: str = "[SEP]"
    continuation_prefix: str = "##"
    pad_id: int = 0
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._index = {}
        for i, tok in enumerate(self.tokens):
            if tok in self._index:
                raise ValueError(f"duplicate token {tok!r} at ids {self._index[tok]} and {i}")
            self._index[tok] = i
        for special in (self.unk_token, self.cls_token, self.sep_token):
            if special not in self._index:
                raise ValueError(f"vocabulary is missing required token {special!r}")

    @classmethod
    def load(cls, path: str) -> "Vocabulary":
        """Load a one-token-per-line vocabulary file (line number = id)."""
        with open(path, encoding="utf-8") as f:
            tokens = [line.rstrip("\r\n") for line in f]
        if tokens and tokens[-1] == "":
            tokens.pop()
        return cls(tokens=tokens)

    def id_of(self, token: str) -> int:
        return self._index[token]

    def __contains__(self, token: str) -> bool:
        return token in self._index

    @property
    def unk_id(self) -> int:
        return self._index[self.unk_token]

    @property
    def cls_id(self) -> int:
        return self._index[self.cls_token]

    @property
    def sep_id(self) -> int:
        return self._index[self.sep_token]


@dataclass(frozen=True)
class TokenSequence:
    ids: tuple[int, ...]
    segment_ids: tuple[int, ...]
    actual_length: int
    truncated: bool

    def __post_init__(self) -> None:
        if len(self.ids) != len(self.segment_ids):
            raise ValueError("ids and segment_ids must have equal length")


def wordpiece(text: str, vocab: Vocabulary) -> list[str]:
    """Greedy longest-match-first segmentation of each whitespace word.

    Non-initial pieces carry the continuation prefix; a word with no valid
    segmentation (or longer than MAX_WORD_CHARS) becomes a single unk token.
    """
    pieces: list[str] = []
    for word in text.split():
        if len(word) > MAX_WORD_CHARS:
            pieces.append(vocab.unk_token)
            continue
        word_pieces: list[str] = []
        start = 0
        while start < len(word):
            end = len(word)
            match = None
            while start < end:
                candidate = word[start:end]
                if start > 0:
                    candidate = vocab.continuation_prefix + candidate
                if candidate in vocab:
                    match = candidate
                    break
                end -= 1
            if match is None:
                word_pieces = [vocab.unk_token]
                break
            word_pieces.append(match)
            start = end
        pieces.extend(word_pieces)
    return pieces


def _pad(ids: list[int], segments: list[int], geometry: ModelGeometry, vocab: Vocabulary,
         truncated: bool) -> TokenSequence:
    actual = len(ids)
    pad_count = geometry.max_tokens - actual
    return TokenSequence(
        ids=tuple(ids + [vocab.pad_id] * pad_count),
        segment_ids=tuple(segments + [0] * pad_count),
        actual_length=actual,
        truncated=truncated,
    )


def encode_single(text: str, vocab: Vocabulary,
                  geometry: ModelGeometry = ModelGeometry()) -> TokenSequence:
    """[CLS] + pieces + [SEP], tail-truncated and zero-padded to max_tokens."""
    budget = geometry.max_tokens - 2
    pieces = wordpiece(text, vocab)
    truncated = len(pieces) > budget
    kept = pieces[:budget]
    ids = [vocab.cls_id] + [vocab.id_of(p) if p in vocab else vocab.unk_id for p in kept]
    ids.append(vocab.sep_id)
    return _pad(ids, [0] * len(ids), geometry, vocab, truncated)


def encode_pair(claim: str, text: str, vocab: Vocabulary,
                geometry: ModelGeometry = ModelGeometry()) -> TokenSequence:
    """[CLS] claim [SEP] text [SEP] with segment ids 0/1, padded to max_tokens.

    Truncation drops pieces from the input text only; the claim always
    survives intact. If the claim leaves no room for even one text piece,
    ClaimTooLong is raised rather than silently emitting a claim-only pair.
    """
    budget = geometry.max_tokens - 3
    claim_pieces = wordpiece(claim, vocab)
    text_pieces = wordpiece(text, vocab)

    text_budget = budget - len(claim_pieces)
    if len(claim_pieces) > budget or (text_pieces and text_budget < 1):
        raise ClaimTooLong(
            f"claim occupies {len(claim_pieces)} of {budget} available pieces, "
            "leaving no room for input text"
        )
    truncated = len(text_pieces) > text_budget
    kept_text = text_pieces[:text_budget]

    def to_id(piece: str) -> int:
        return vocab.id_of(piece) if piece in vocab else vocab.unk_id

    ids = [vocab.cls_id] + [to_id(p) for p in claim_pieces] + [vocab.sep_id]
    segments = [0] * len(ids)
    ids += [to_id(p) for p in kept_text] + [vocab.sep_id]
    segments += [1] * (len(kept_text) + 1)
    return _pad(ids, segments, geometry, vocab, truncated)
