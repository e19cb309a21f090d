"""Human-model distances: per-story absolute deviations and their average.

For one image sequence, the model story and the human story are scored by
the same three metrics; the per-metric distances are the absolute
differences, and the overall distance is their mean:

    d_c = |C_human - C_model|
    d_g = |G_human - G_model|
    d_r = |R_human - R_model|
    d_hm = (d_c + d_g + d_r) / 3

Corpus-level numbers are means of the per-story values. The distance
between the corpus-mean score vectors is carried alongside for
transparency, since the two aggregations genuinely differ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import fmean
from typing import Sequence

from .errors import ArityMismatch, EmptyCorpus, ThresholdMismatch
from .stories import MetricScores


@dataclass(frozen=True)
class DistanceRecord:
    sequence_id: str
    system: str
    d_c: float
    d_g: float
    d_r: float
    d_hm: float


@dataclass(frozen=True)
class CorpusReport:
    """Per-system distance aggregation over one story set."""

    system: str
    n: int
    mean_d_hm: float
    mean_d_c: float
    mean_d_g: float
    mean_d_r: float
    per_story: tuple[DistanceRecord, ...]
    threshold_id: str
    # |mean_human - mean_model| per metric, averaged: the "distance of the
    # means" alternative aggregation, reported alongside the mean of the
    # per-story distances.
    d_hm_of_means: float | None = None


def metric_distances(human: MetricScores, model: MetricScores) -> tuple[float, float, float]:
    """Componentwise absolute differences (coherence, grounding, repetition).

    Grounding scores are centered on a corpus threshold, so comparing scores
    produced under different thresholds raises ThresholdMismatch.
    """
    if human.threshold_id != model.threshold_id:
        raise ThresholdMismatch(
            f"human scored under {human.threshold_id!r}, model under {model.threshold_id!r}"
        )
    return (abs(human.coherence - model.coherence),
            abs(human.grounding - model.grounding),
            abs(human.repetition - model.repetition))


def aggregate_distance(d_c: float, d_g: float, d_r: float) -> float:
    """Mean of the three metric-level deviations."""
    if d_c < 0 or d_g < 0 or d_r < 0:
        raise ValueError("metric distances must be nonnegative")
    return (d_c + d_g + d_r) / 3


def distance_record(sequence_id: str, system: str, human: MetricScores,
                    model: MetricScores) -> DistanceRecord:
    d_c, d_g, d_r = metric_distances(human, model)
    return DistanceRecord(sequence_id=sequence_id, system=system,
                          d_c=d_c, d_g=d_g, d_r=d_r,
                          d_hm=aggregate_distance(d_c, d_g, d_r))


def corpus_distance(pairs: Sequence[tuple[str, MetricScores, MetricScores]],
                    system: str) -> CorpusReport:
    """Aggregate (sequence_id, human scores, model scores) triples.

    All pairs must share one threshold_id; corpus means are arithmetic means
    of the per-story records.
    """
    if not pairs:
        raise EmptyCorpus(f"no scored pairs for system {system!r}")
    threshold_ids = {h.threshold_id for _, h, m in pairs} | {m.threshold_id for _, h, m in pairs}
    if len(threshold_ids) > 1:
        raise ThresholdMismatch(f"mixed thresholds in one corpus: {sorted(threshold_ids)}")
    records = tuple(distance_record(seq_id, system, h, m) for seq_id, h, m in pairs)

    mean_h = (fmean(h.coherence for _, h, _ in pairs),
              fmean(h.grounding for _, h, _ in pairs),
              fmean(h.repetition for _, h, _ in pairs))
    mean_m = (fmean(m.coherence for _, _, m in pairs),
              fmean(m.grounding for _, _, m in pairs),
              fmean(m.repetition for _, _, m in pairs))
    d_of_means = aggregate_distance(*(abs(a - b) for a, b in zip(mean_h, mean_m)))

    return CorpusReport(
        system=system,
        n=len(records),
        mean_d_hm=fmean(r.d_hm for r in records),
        mean_d_c=fmean(r.d_c for r in records),
        mean_d_g=fmean(r.d_g for r in records),
        mean_d_r=fmean(r.d_r for r in records),
        per_story=records,
        threshold_id=threshold_ids.pop(),
        d_hm_of_means=d_of_means,
    )


def prompt_variant_average(reports: Sequence[CorpusReport]) -> CorpusReport:
    """Fieldwise mean over prompt-variant reports of one system family.

    The variants must cover the same corpus (equal n); per-story records are
    dropped since they no longer correspond to a single scored run.
    """
    if not reports:
        raise EmptyCorpus("no reports to average")
    ns = {r.n for r in reports}
    if len(ns) > 1:
        raise ArityMismatch(f"variant reports cover different corpus sizes: {sorted(ns)}")
    threshold_ids = {r.threshold_id for r in reports}
    if len(threshold_ids) > 1:
        raise ThresholdMismatch(f"mixed thresholds across variants: {sorted(threshold_ids)}")
    of_means = [r.d_hm_of_means for r in reports if r.d_hm_of_means is not None]
    return CorpusReport(
        system=reports[0].system,
        n=reports[0].n,
        mean_d_hm=fmean(r.mean_d_hm for r in reports),
        mean_d_c=fmean(r.mean_d_c for r in reports),
        mean_d_g=fmean(r.mean_d_g for r in reports),
        mean_d_r=fmean(r.mean_d_r for r in reports),
        per_story=(),
        threshold_id=threshold_ids.pop(),
        d_hm_of_means=fmean(of_means) if len(of_means) == len(reports) else None,
    )
