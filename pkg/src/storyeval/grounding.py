"""Visual grounding from precomputed embeddings.

Each noun phrase is aligned to the best-matching bounding box (max cosine
similarity), centered on a corpus-level threshold, weighted by word
concreteness, and averaged over the story's NPs:

    final = mean_i  weight_i * (max_sim_i - tau)

tau is the mean of the retained per-NP max similarities over a reference
story set, so an "averagely grounded" NP contributes zero. Scores are not
clamped: with weights in [0, 1] and cosine similarities in [-1, 1] the
achievable range depends on tau, and published per-story values do exceed 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyCorpus, NoBoxes, ThresholdMissing
from .stories import FeatureBundle, ImageSequence


@dataclass(frozen=True)
class CorpusThreshold:
    """Mean per-NP max alignment over a declared source story set."""

    threshold_id: str
    tau: float
    np_count: int
    source: str

    def __post_init__(self):
        if self.np_count <= 0:
            raise ValueError("threshold must be computed from at least one NP")


@dataclass(frozen=True)
class NPContribution:
    np_index: int
    max_sim: float
    weight: float
    contribution: float


@dataclass(frozen=True)
class GroundingBreakdown:
    per_np: tuple[NPContribution, ...]
    final: float
    threshold_id: str
    degenerate: bool = False  # story had zero NPs


def np_alignment(np_embedding: Sequence[float],
                 box_embeddings: Sequence[Sequence[float]]) -> float:
    """Max cosine similarity between one NP and all boxes (unit vectors assumed).

    Raises NoBoxes when there are no box embeddings at all, which signals an
    extraction failure upstream; callers exclude the story with a warning.
    """
    if len(box_embeddings) == 0:
        raise NoBoxes("no box embeddings to align against")
    sims = np.asarray(box_embeddings, dtype=float) @ np.asarray(np_embedding, dtype=float)
    return float(sims.max())


def corpus_threshold(all_max_sims: Sequence[float], threshold_id: str,
                     source: str) -> CorpusThreshold:
    """Arithmetic mean of the retained per-NP max similarities."""
    if len(all_max_sims) == 0:
        raise EmptyCorpus("cannot compute a threshold from zero NP scores")
    tau = math.fsum(all_max_sims) / len(all_max_sims)
    return CorpusThreshold(threshold_id=threshold_id, tau=tau,
                           np_count=len(all_max_sims), source=source)


def grounding_score(bundle: FeatureBundle, sequence: ImageSequence,
                    threshold: CorpusThreshold | None) -> GroundingBreakdown:
    """Concreteness-weighted, threshold-centered alignment, averaged over NPs.

    Stories without any NP cannot be grounded; they score 0.0 and are
    flagged degenerate rather than excluded.
    """
    if threshold is None:
        raise ThresholdMissing("no corpus threshold bound to this run")
    sequence_images = {img.image_id for img in sequence.images}
    box_embeddings = [f.embedding for f in bundle.box_features
                      if f.image_id in sequence_images]
    if not bundle.np_features:
        return GroundingBreakdown(per_np=(), final=0.0,
                                  threshold_id=threshold.threshold_id, degenerate=True)
    per_np = []
    for feat in sorted(bundle.np_features, key=lambda f: f.np_index):
        max_sim = np_alignment(feat.embedding, box_embeddings)
        contribution = feat.concreteness_weight * (max_sim - threshold.tau)
        per_np.append(NPContribution(np_index=feat.np_index, max_sim=max_sim,
                                     weight=feat.concreteness_weight,
                                     contribution=contribution))
    final = math.fsum(c.contribution for c in per_np) / len(per_np)
    return GroundingBreakdown(per_np=tuple(per_np), final=final,
                              threshold_id=threshold.threshold_id)
