"""Embedding backends producing the shared NP/box vector space.

The default `hash` backend is fully deterministic and dependency-free: a
text is decomposed into word unigrams and boundary-marked character
trigrams, each feature is hashed (blake2b, stable across runs and
platforms) into one of D signed buckets, and the resulting vector is
L2-normalized. Identical strings map to identical vectors and lexically
close strings to nearby ones, which is what the smoke tests rely on.
Bounding boxes are embedded through their detector labels, i.e. the
precomputed-detector route; a real cross-modal encoder can be plugged in
through the `clip:` prefix when its stack is installed.
"""

from __future__ import annotations

import hashlib
import math
from typing import Protocol, Sequence

from .errors import ImageDecodeError, ModelUnavailable


class TextEmbedder(Protocol):
    name: str
    dim: int

    def embed_text(self, text: str) -> tuple[float, ...]: ...


class HashEmbedder:
    """Feature-hashing text embedder (unit-norm, deterministic)."""

    def __init__(self, dim: int = 512):
        if dim < 8:
            raise ValueError(f"embedding dim too small: {dim}")
        self.dim = dim
        self.name = f"hash-{dim}"

    def _features(self, text: str) -> list[str]:
        tokens = [t for t in text.lower().split() if t]
        feats = [f"w:{t}" for t in tokens]
        for tok in tokens:
            marked = f"^{tok}$"
            feats.extend(f"c:{marked[k:k + 3]}" for k in range(len(marked) - 2))
        return feats or ["w:<empty>"]

    def embed_text(self, text: str) -> tuple[float, ...]:
        vec = [0.0] * self.dim
        for feat in self._features(text):
            digest = hashlib.blake2b(feat.encode("utf-8"), digest_size=9).digest()
            bucket = int.from_bytes(digest[:8], "big") % self.dim
            sign = 1.0 if digest[8] & 1 else -1.0
            vec[bucket] += sign
        norm = math.sqrt(sum(x * x for x in vec))
        if norm == 0.0:  # all features cancelled; fall back to a fixed direction
            vec[0] = 1.0
            norm = 1.0
        return tuple(x / norm for x in vec)


class ClipEmbedder:
    """Adapter for a real CLIP-style encoder; needs sentence-transformers."""

    def __init__(self, model_id: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise ModelUnavailable(
                f"sentence-transformers not installed; cannot load {model_id!r}"
            ) from exc
        try:
            self._model = SentenceTransformer(model_id)
        except Exception as exc:  # hub unreachable, weights absent, ...
            raise ModelUnavailable(f"cannot load {model_id!r}: {exc}") from exc
        self.name = model_id
        probe = self._model.encode(["probe"], normalize_embeddings=True)
        self.dim = int(probe.shape[1])

    def embed_text(self, text: str) -> tuple[float, ...]:
        vec = self._model.encode([text], normalize_embeddings=True)[0]
        return tuple(float(x) for x in vec)

    def embed_image(self, path: str, box=None) -> tuple[float, ...]:
        try:
            from PIL import Image
        except ImportError as exc:
            raise ModelUnavailable("Pillow not installed") from exc
        try:
            image = Image.open(path).convert("RGB")
        except OSError as exc:
            raise ImageDecodeError(f"cannot open {path}: {exc}") from exc
        if box is not None:
            image = image.crop((box.x, box.y, box.x + box.w, box.y + box.h))
        vec = self._model.encode([image], normalize_embeddings=True)[0]
        return tuple(float(x) for x in vec)


def make_embedder(model_id: str, dim: int = 512) -> TextEmbedder:
    """`hash` (default) or `clip:<model id>`."""
    if model_id == "hash":
        return HashEmbedder(dim=dim)
    if model_id.startswith("clip:"):
        return ClipEmbedder(model_id.split(":", 1)[1])
    raise ModelUnavailable(f"unknown embedding backend {model_id!r}")


def box_label_text(label: str | None, image_id: str, box_index: int) -> str:
    """Text stood in for a box crop; unlabeled boxes get a stable fallback."""
    if label:
        return label
    return f"object {box_index} in {image_id}"
