"""Coherence as the mean probability that each sentence follows its prefix.

The probabilities themselves come from the extraction sidecar (a sentence
order model scoring each sentence against the concatenation of everything
before it); this module only checks their shape and averages them.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean

from .errors import ArityMismatch
from .stories import FeatureBundle


@dataclass(frozen=True)
class CoherenceInput:
    """Follow probabilities for sentences 2..n of one story."""

    story_id: str
    follow_probs: tuple[float, ...]

    def __post_init__(self):
        for i, p in enumerate(self.follow_probs):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"follow prob {i} out of [0, 1]: {p}")

    @classmethod
    def from_bundle(cls, bundle: FeatureBundle) -> "CoherenceInput":
        return cls(story_id=bundle.story_id, follow_probs=bundle.follow_probs)


@dataclass(frozen=True)
class CoherenceResult:
    value: float
    # True for single-sentence stories: there is no prefix to follow, so the
    # 1.0 is a convention rather than a measurement.
    degenerate: bool = False


def coherence_score(inp: CoherenceInput, sentence_count: int | None = None) -> CoherenceResult:
    """Arithmetic mean of the follow probabilities.

    When `sentence_count` is given, the probability list must have exactly
    sentence_count - 1 entries (ArityMismatch otherwise). An empty list is
    a single-sentence story and scores 1.0, flagged degenerate.
    """
    if sentence_count is not None:
        expected = max(0, sentence_count - 1)
        if len(inp.follow_probs) != expected:
            raise ArityMismatch(
                f"story {inp.story_id!r}: {len(inp.follow_probs)} follow probs "
                f"for {sentence_count} sentences (expected {expected})"
            )
    if not inp.follow_probs:
        return CoherenceResult(value=1.0, degenerate=True)
    return CoherenceResult(value=fmean(inp.follow_probs))
