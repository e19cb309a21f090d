"""Extractor configuration."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class ExtractorConfig:
    """Which backends and resources produce the feature bundles.

    The default model ids name the deterministic built-in backends, which
    need no downloads: `hash` embeds text by feature hashing into a shared
    space (detector box labels stand in for crops), and `lexical-cohesion`
    scores sentence-follow probabilities from discourse cues. Real model
    adapters (e.g. a CLIP id, an ALBERT order model) can be configured and
    raise ModelUnavailable when their stack is absent.
    """

    embedding_model_id: str = "hash"
    sentence_order_model_id: str = "lexical-cohesion"
    concreteness_lexicon_path: Path | None = None  # None -> packaged lexicon
    detector_source: str = "precomputed"  # boxes (and labels) ship with the manifest
    generation_endpoint: str | None = None
    embedding_dim: int = 512
    order_context_limit: int = 256  # prefix tokens before left-truncation
    include_pronoun_nps: bool = False
    lowercase: bool = True
    extractor_version: str = "0.1.0"
