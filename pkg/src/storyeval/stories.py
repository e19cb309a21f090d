"""Data model for image sequences, stories, and precomputed feature bundles.

Stories are immutable: a story is an ordered list of sentences, each with
lowercase word tokens and optional noun-phrase spans. Feature bundles carry
everything the metrics need that requires model inference (embeddings,
concreteness weights, sentence-follow probabilities), so scoring itself is
deterministic and model-free.

Text segmentation is rule-based and declared here once: sentences split on
terminal punctuation followed by whitespace, tokens are lowercase with edge
punctuation stripped and placeholder tokens like ``[male]`` kept whole.
"""

from __future__ import annotations

import math
import re
import string
from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import EmptyText, IdMismatch

UNIT_NORM_TOLERANCE = 1e-4
DEFAULT_EMBEDDING_DIM = 512

_WORDCHAR = re.compile(r"[^\W_]")
_SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s+")
_PLACEHOLDER = re.compile(r"\[[a-z_]+\]")
_EDGE_PUNCT = string.punctuation
_EDGE_PUNCT_KEEP_BRACKETS = "".join(c for c in string.punctuation if c not in "[]")
_AUTHOR_PATTERN = re.compile(r"^(human|system:[\w.+-]+)$")


# ---------------------------------------------------------------------------
# Text segmentation
# ---------------------------------------------------------------------------

def split_sentences(text: str) -> list["Sentence"]:
    """Split a story text into sentences on terminal punctuation.

    A boundary is a run of ``.``, ``!`` or ``?`` followed by whitespace (or
    the end of the text). Punctuation is retained. Fragments without any word
    character (e.g. a stray ``.`` between sentences) are merged into the
    nearest real sentence instead of becoming empty sentences.

    Raises EmptyText if the input has no sentence content at all.
    """
    normalized = " ".join(text.split())
    if not normalized:
        raise EmptyText("input text is empty or whitespace-only")

    texts: list[str] = []
    pending = ""  # leading punctuation-only fragments with no sentence yet
    for piece in _SENTENCE_BREAK.split(normalized):
        if _WORDCHAR.search(piece):
            if pending:
                piece = pending + " " + piece
                pending = ""
            texts.append(piece)
        elif texts:
            texts[-1] = texts[-1] + " " + piece
        else:
            pending = (pending + " " + piece) if pending else piece
    if pending:
        if not texts:
            raise EmptyText("input text contains no sentence content")
        texts[-1] = texts[-1] + " " + pending

    return [Sentence(text=t, tokens=tuple(tokenize(t))) for t in texts]


def tokenize(sentence_text: str) -> list[str]:
    """Lowercase and whitespace-split, stripping edge punctuation per token.

    Placeholder tokens such as ``[male]`` or ``[location]`` survive intact
    (including when followed by punctuation, e.g. ``[male],``). Internal
    punctuation is preserved, so ``don't`` stays one token. Tokens that are
    pure punctuation vanish.
    """
    tokens: list[str] = []
    for raw in sentence_text.lower().split():
        candidate = raw.strip(_EDGE_PUNCT_KEEP_BRACKETS)
        if _PLACEHOLDER.fullmatch(candidate):
            tokens.append(candidate)
            continue
        stripped = candidate.strip(_EDGE_PUNCT)
        if stripped:
            tokens.append(stripped)
    return tokens


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in pixel coordinates (x, y are the top-left corner)."""

    x: float
    y: float
    w: float
    h: float
    label: str | None = None

    def __post_init__(self):
        if self.w < 0 or self.h < 0:
            raise ValueError(f"bounding box has negative extent: w={self.w}, h={self.h}")
        if self.x < 0 or self.y < 0:
            raise ValueError(f"bounding box has negative origin: x={self.x}, y={self.y}")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"x": self.x, "y": self.y, "w": self.w, "h": self.h}
        if self.label is not None:
            d["label"] = self.label
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BoundingBox":
        return cls(x=d["x"], y=d["y"], w=d["w"], h=d["h"], label=d.get("label"))


@dataclass(frozen=True)
class ImageRef:
    image_id: str
    uri: str
    boxes: tuple[BoundingBox, ...] = ()
    width: int | None = None
    height: int | None = None
    available: bool = True

    def __post_init__(self):
        if self.width is not None and self.height is not None:
            for box in self.boxes:
                if box.x + box.w > self.width or box.y + box.h > self.height:
                    raise ValueError(
                        f"box {box} exceeds image extent {self.width}x{self.height} "
                        f"in image {self.image_id!r}"
                    )

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"image_id": self.image_id, "uri": self.uri,
                             "boxes": [b.to_dict() for b in self.boxes]}
        if self.width is not None:
            d["width"] = self.width
        if self.height is not None:
            d["height"] = self.height
        if not self.available:
            d["available"] = False
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ImageRef":
        return cls(
            image_id=d["image_id"],
            uri=d["uri"],
            boxes=tuple(BoundingBox.from_dict(b) for b in d.get("boxes", [])),
            width=d.get("width"),
            height=d.get("height"),
            available=d.get("available", True),
        )


@dataclass(frozen=True)
class ImageSequence:
    sequence_id: str
    images: tuple[ImageRef, ...]

    def __post_init__(self):
        if not self.images:
            raise ValueError(f"image sequence {self.sequence_id!r} has no images")

    @property
    def box_count(self) -> int:
        return sum(len(img.boxes) for img in self.images)

    def to_dict(self) -> dict[str, Any]:
        return {"sequence_id": self.sequence_id,
                "images": [img.to_dict() for img in self.images]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ImageSequence":
        return cls(sequence_id=d["sequence_id"],
                   images=tuple(ImageRef.from_dict(i) for i in d["images"]))


@dataclass(frozen=True)
class NPSpan:
    """Character span of a noun phrase within its sentence's text."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"invalid NP span [{self.start}, {self.end})")

    def to_dict(self) -> dict[str, int]:
        return {"start": self.start, "end": self.end}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "NPSpan":
        return cls(start=d["start"], end=d["end"])


@dataclass(frozen=True)
class Sentence:
    text: str
    tokens: tuple[str, ...]
    nps: tuple[NPSpan, ...] = ()

    def __post_init__(self):
        for span in self.nps:
            if span.end > len(self.text):
                raise ValueError(
                    f"NP span [{span.start}, {span.end}) exceeds sentence of "
                    f"length {len(self.text)}: {self.text!r}"
                )

    def np_text(self, span: NPSpan) -> str:
        return self.text[span.start:span.end]

    def to_dict(self) -> dict[str, Any]:
        return {"text": self.text, "tokens": list(self.tokens),
                "nps": [s.to_dict() for s in self.nps]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Sentence":
        return cls(text=d["text"], tokens=tuple(d["tokens"]),
                   nps=tuple(NPSpan.from_dict(s) for s in d.get("nps", [])))


@dataclass(frozen=True)
class Story:
    """An ordered multi-sentence story tied to one image sequence."""

    story_id: str
    sequence_id: str
    author: str  # "human" or "system:<name>"
    text: str
    sentences: tuple[Sentence, ...]

    def __post_init__(self):
        if not self.sentences:
            raise ValueError(f"story {self.story_id!r} has no sentences")
        if not _AUTHOR_PATTERN.match(self.author):
            raise ValueError(f"author must be 'human' or 'system:<name>', got {self.author!r}")
        rebuilt = " ".join(s.text for s in self.sentences)
        if rebuilt != self.text:
            raise ValueError(
                f"story {self.story_id!r}: sentence texts do not reconstruct the story text"
            )

    @classmethod
    def from_text(cls, story_id: str, sequence_id: str, author: str, text: str,
                  nps: Iterable[Iterable[NPSpan]] | None = None) -> "Story":
        """Build a story from raw text, segmenting and tokenizing it here.

        `nps` optionally supplies one span list per resulting sentence.
        """
        sentences = split_sentences(text)
        if nps is not None:
            span_lists = [tuple(spans) for spans in nps]
            if len(span_lists) != len(sentences):
                raise ValueError(
                    f"got NP spans for {len(span_lists)} sentences, "
                    f"but text splits into {len(sentences)}"
                )
            sentences = [Sentence(s.text, s.tokens, spans)
                         for s, spans in zip(sentences, span_lists)]
        return cls(story_id=story_id, sequence_id=sequence_id, author=author,
                   text=" ".join(s.text for s in sentences), sentences=tuple(sentences))

    def noun_phrases(self) -> list[tuple[int, NPSpan]]:
        """All NP spans in story order as (sentence_index, span) pairs."""
        return [(i, span) for i, sent in enumerate(self.sentences) for span in sent.nps]

    def np_texts(self) -> list[str]:
        return [self.sentences[i].np_text(span) for i, span in self.noun_phrases()]

    @property
    def np_count(self) -> int:
        return sum(len(s.nps) for s in self.sentences)

    def to_dict(self) -> dict[str, Any]:
        return {"story_id": self.story_id, "sequence_id": self.sequence_id,
                "author": self.author, "text": self.text,
                "sentences": [s.to_dict() for s in self.sentences]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Story":
        if "sentences" in d and d["sentences"]:
            return cls(story_id=d["story_id"], sequence_id=d["sequence_id"],
                       author=d["author"], text=d["text"],
                       sentences=tuple(Sentence.from_dict(s) for s in d["sentences"]))
        return cls.from_text(d["story_id"], d["sequence_id"], d["author"], d["text"])


@dataclass(frozen=True)
class NPFeature:
    np_index: int
    embedding: tuple[float, ...]
    concreteness_weight: float

    def to_dict(self) -> dict[str, Any]:
        return {"np_index": self.np_index, "embedding": list(self.embedding),
                "concreteness_weight": self.concreteness_weight}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "NPFeature":
        return cls(np_index=d["np_index"], embedding=tuple(d["embedding"]),
                   concreteness_weight=d["concreteness_weight"])


@dataclass(frozen=True)
class BoxFeature:
    image_id: str
    box_index: int
    embedding: tuple[float, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"image_id": self.image_id, "box_index": self.box_index,
                "embedding": list(self.embedding)}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BoxFeature":
        return cls(image_id=d["image_id"], box_index=d["box_index"],
                   embedding=tuple(d["embedding"]))


@dataclass(frozen=True)
class FeatureBundle:
    """Per-story precomputed features; the boundary to the extraction sidecar."""

    story_id: str
    embedding_dim: int
    np_features: tuple[NPFeature, ...] = ()
    box_features: tuple[BoxFeature, ...] = ()
    follow_probs: tuple[float, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {"story_id": self.story_id,
                "np_features": [f.to_dict() for f in self.np_features],
                "box_features": [f.to_dict() for f in self.box_features],
                "follow_probs": list(self.follow_probs)}

    @classmethod
    def from_dict(cls, d: dict[str, Any], embedding_dim: int) -> "FeatureBundle":
        return cls(story_id=d["story_id"], embedding_dim=embedding_dim,
                   np_features=tuple(NPFeature.from_dict(f) for f in d.get("np_features", [])),
                   box_features=tuple(BoxFeature.from_dict(f) for f in d.get("box_features", [])),
                   follow_probs=tuple(d.get("follow_probs", [])))


@dataclass(frozen=True)
class MetricScores:
    """The (coherence, grounding, repetition) triple for one story."""

    coherence: float
    grounding: float
    repetition: float
    threshold_id: str
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.coherence <= 1.0:
            raise ValueError(f"coherence out of [0, 1]: {self.coherence}")
        if not 0.0 <= self.repetition <= 1.0:
            raise ValueError(f"repetition out of [0, 1]: {self.repetition}")

    def to_dict(self) -> dict[str, Any]:
        return {"coherence": self.coherence, "grounding": self.grounding,
                "repetition": self.repetition, "threshold_id": self.threshold_id,
                "flags": list(self.flags)}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "MetricScores":
        return cls(coherence=d["coherence"], grounding=d["grounding"],
                   repetition=d["repetition"], threshold_id=d["threshold_id"],
                   flags=tuple(d.get("flags", [])))


# ---------------------------------------------------------------------------
# Bundle validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    story_id: str
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _norm(vector: tuple[float, ...]) -> float:
    return math.sqrt(math.fsum(x * x for x in vector))


def validate_bundle(story: Story, bundle: FeatureBundle) -> ValidationReport:
    """Check a feature bundle against its story's structure.

    Returns a report listing every invariant violation (empty report means
    the bundle is valid). Raises IdMismatch when the two refer to different
    stories, since no meaningful comparison is possible then.
    """
    if story.story_id != bundle.story_id:
        raise IdMismatch(
            f"story {story.story_id!r} vs bundle {bundle.story_id!r}"
        )
    violations: list[str] = []

    for feat in bundle.np_features:
        if len(feat.embedding) != bundle.embedding_dim:
            violations.append(
                f"np {feat.np_index}: embedding dim {len(feat.embedding)} != {bundle.embedding_dim}"
            )
        elif abs(_norm(feat.embedding) - 1.0) > UNIT_NORM_TOLERANCE:
            violations.append(f"np {feat.np_index}: non-unit embedding (norm {_norm(feat.embedding):.6f})")
        if not 0.0 <= feat.concreteness_weight <= 1.0:
            violations.append(
                f"np {feat.np_index}: concreteness weight {feat.concreteness_weight} out of [0, 1]"
            )
    for feat in bundle.box_features:
        if len(feat.embedding) != bundle.embedding_dim:
            violations.append(
                f"box {feat.image_id}/{feat.box_index}: embedding dim "
                f"{len(feat.embedding)} != {bundle.embedding_dim}"
            )
        elif abs(_norm(feat.embedding) - 1.0) > UNIT_NORM_TOLERANCE:
            violations.append(
                f"box {feat.image_id}/{feat.box_index}: non-unit embedding "
                f"(norm {_norm(feat.embedding):.6f})"
            )

    expected_probs = max(0, len(story.sentences) - 1)
    if len(bundle.follow_probs) != expected_probs:
        violations.append(
            f"prob arity: {len(bundle.follow_probs)} follow probs for "
            f"{len(story.sentences)} sentences (expected {expected_probs})"
        )
    for i, p in enumerate(bundle.follow_probs):
        if not 0.0 <= p <= 1.0:
            violations.append(f"follow prob {i} out of [0, 1]: {p}")

    indices = sorted(f.np_index for f in bundle.np_features)
    if indices != list(range(story.np_count)):
        violations.append(
            f"np indices {indices} are not a bijection with the story's "
            f"{story.np_count} NP spans"
        )
    return ValidationReport(story_id=story.story_id, violations=tuple(violations))
