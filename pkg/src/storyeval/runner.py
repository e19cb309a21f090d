"""End-to-end evaluation runs: threshold pass, scoring, distances, persistence.

A run is reproducible by construction: the config (including the seed) is
hashed into the summary, every grounding score records its threshold id,
and all CSV outputs are byte-stable across reruns. Timestamps appear only
in the summary's reproducibility block. Partial runs are never left behind;
everything is written to a scratch directory and atomically renamed.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import __version__ as TOOL_VERSION
from .coherence import CoherenceInput, coherence_score
from .corpus import Manifest, ManifestItem, _utc_now, save_threshold
from .distances import CorpusReport, corpus_distance
from .errors import EmptyCorpus, MissingBundle
from .grounding import CorpusThreshold, corpus_threshold, grounding_score, np_alignment
from .repetition import RepetitionConfig, repetition_score
from .stories import FeatureBundle, MetricScores, Story, validate_bundle

logger = logging.getLogger(__name__)

HUMAN_SYSTEM = "human"  # pseudo-system pairing the human story with itself

DISTANCE_COLUMNS = ["sequence_id", "d_c", "d_g", "d_r", "d_hm"]
SCORE_COLUMNS = ["story_id", "sequence_id", "author", "coherence", "grounding",
                 "repetition", "threshold_id", "flags"]


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    repetition: RepetitionConfig = field(default_factory=RepetitionConfig)
    threshold_source: str = "human"  # "human" or "all": which stories feed tau
    sample_bins: int = 10
    model_sizes: dict[str, float] = field(default_factory=dict)  # system -> params (millions)

    def __post_init__(self):
        if self.threshold_source not in ("human", "all"):
            raise ValueError(f"threshold_source must be 'human' or 'all', "
                             f"got {self.threshold_source!r}")

    def to_dict(self) -> dict[str, Any]:
        return {"seed": self.seed,
                "repetition": {"inter_mode": self.repetition.inter_mode,
                               "inter_aggregate": self.repetition.inter_aggregate,
                               "denominator": self.repetition.denominator,
                               "keep_remainder": self.repetition.keep_remainder},
                "threshold_source": self.threshold_source,
                "sample_bins": self.sample_bins,
                "model_sizes": dict(sorted(self.model_sizes.items()))}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "RunConfig":
        rep = d.get("repetition", {})
        return cls(seed=d.get("seed", 0),
                   repetition=RepetitionConfig(
                       inter_mode=rep.get("inter_mode", "pairwise"),
                       inter_aggregate=rep.get("inter_aggregate", "mean"),
                       denominator=rep.get("denominator", "union"),
                       keep_remainder=rep.get("keep_remainder", False)),
                   threshold_source=d.get("threshold_source", "human"),
                   sample_bins=d.get("sample_bins", 10),
                   model_sizes=dict(d.get("model_sizes", {})))

    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()


def _require_bundles(stories: Sequence[Story],
                     bundles: Mapping[str, FeatureBundle]) -> None:
    bad: list[str] = []
    for story in stories:
        bundle = bundles.get(story.story_id)
        if bundle is None:
            bad.append(story.story_id)
            continue
        report = validate_bundle(story, bundle)
        if not report.ok:
            logger.error("invalid bundle for %s: %s", story.story_id,
                         "; ".join(report.violations))
            bad.append(story.story_id)
    if bad:
        raise MissingBundle(bad)


def _threshold_pass(items: Sequence[ManifestItem], systems: Sequence[str],
                    bundles: Mapping[str, FeatureBundle], source: str,
                    dataset: str, split: str) -> CorpusThreshold:
    pooled: list[float] = []
    for item in items:
        stories = [item.human_story]
        if source == "all":
            stories += [item.model_stories[s] for s in systems
                        if s != HUMAN_SYSTEM and s in item.model_stories]
        for story in stories:
            bundle = bundles[story.story_id]
            boxes = [f.embedding for f in bundle.box_features]
            for feat in sorted(bundle.np_features, key=lambda f: f.np_index):
                pooled.append(np_alignment(feat.embedding, boxes))
    if not pooled:
        raise EmptyCorpus("threshold source set contains no NPs")
    digest = hashlib.sha256(
        json.dumps([dataset, split, source] + [repr(s) for s in pooled]).encode("utf-8")
    ).hexdigest()[:12]
    return corpus_threshold(pooled, threshold_id=f"{dataset}:{split}:{source}:{digest}",
                            source=f"{source} stories of {dataset}/{split}")


def _score_story(story: Story, bundle: FeatureBundle, sequence,
                 threshold: CorpusThreshold, rep_config: RepetitionConfig) -> MetricScores:
    flags: list[str] = []
    coh = coherence_score(CoherenceInput.from_bundle(bundle),
                          sentence_count=len(story.sentences))
    if coh.degenerate:
        flags.append("degenerate_coherence")
    grd = grounding_score(bundle, sequence, threshold)
    if grd.degenerate:
        flags.append("degenerate_grounding")
    rep = repetition_score(story, rep_config)
    return MetricScores(coherence=coh.value, grounding=grd.final,
                        repetition=rep.final, threshold_id=threshold.threshold_id,
                        flags=tuple(flags))


def score_manifest(manifest: Manifest, bundles: Mapping[str, FeatureBundle],
                   systems: Sequence[str] | None = None,
                   config: RunConfig | None = None):
    """Threshold pass plus per-story scoring, without distance aggregation.

    Returns (usable items, excluded sequence ids, threshold, scores) where
    scores maps (sequence_id, author) to MetricScores. Raises MissingBundle
    if any story in scope lacks a valid bundle; items whose sequences carry
    zero box embeddings are excluded with a warning since grounding is
    undefined for them.
    """
    config = config or RunConfig()
    systems = list(systems) if systems is not None else manifest.systems
    if not systems:
        raise EmptyCorpus("no systems to evaluate")

    # Fail fast on missing stories/bundles before any scoring or exclusion.
    scoped: list[tuple[ManifestItem, list[Story]]] = []
    all_stories: list[Story] = []
    for item in manifest.items:
        missing = [s for s in systems if s != HUMAN_SYSTEM and s not in item.model_stories]
        if missing:
            raise EmptyCorpus(f"item {item.sequence.sequence_id} has no story for "
                              f"system(s): {', '.join(missing)}")
        stories = [item.human_story] + [item.model_stories[s] for s in systems
                                        if s != HUMAN_SYSTEM]
        scoped.append((item, stories))
        all_stories.extend(stories)
    _require_bundles(all_stories, bundles)

    # Grounding needs at least one box embedding per sequence.
    usable: list[ManifestItem] = []
    excluded: list[str] = []
    for item, stories in scoped:
        if any(bundles[s.story_id].box_features for s in stories):
            usable.append(item)
        else:
            excluded.append(item.sequence.sequence_id)
            logger.warning("excluding %s: no box embeddings for its sequence",
                           item.sequence.sequence_id)
    if not usable:
        raise EmptyCorpus("no usable items after exclusions")

    threshold = _threshold_pass(usable, systems, bundles, config.threshold_source,
                                manifest.dataset, manifest.split)

    scores: dict[tuple[str, str], MetricScores] = {}  # (sequence_id, author) -> scores
    for item in usable:
        seq_id = item.sequence.sequence_id
        scores[(seq_id, "human")] = _score_story(
            item.human_story, bundles[item.human_story.story_id], item.sequence,
            threshold, config.repetition)
        for name in systems:
            if name == HUMAN_SYSTEM:
                continue
            story = item.model_stories[name]
            scores[(seq_id, f"system:{name}")] = _score_story(
                story, bundles[story.story_id], item.sequence, threshold,
                config.repetition)
    return usable, excluded, threshold, scores


def run_evaluation(manifest: Manifest, bundles: Mapping[str, FeatureBundle],
                   out_dir: str | Path, systems: Sequence[str] | None = None,
                   config: RunConfig | None = None, overwrite: bool = False) -> Path:
    """Score a manifest against bundles and persist one run directory.

    `systems` defaults to every system present in the manifest; the special
    name "human" pairs the human story with itself (control run). Partial
    runs are never written: outputs land in a scratch directory that is
    atomically renamed on success.
    """
    config = config or RunConfig()
    out_dir = Path(out_dir)
    if out_dir.exists() and not overwrite:
        raise FileExistsError(f"run directory {out_dir} already exists")
    systems = list(systems) if systems is not None else manifest.systems
    usable, excluded, threshold, scores = score_manifest(manifest, bundles,
                                                         systems, config)

    reports: dict[str, CorpusReport] = {}
    for name in systems:
        author = "human" if name == HUMAN_SYSTEM else f"system:{name}"
        pairs = [(item.sequence.sequence_id,
                  scores[(item.sequence.sequence_id, "human")],
                  scores[(item.sequence.sequence_id, author)])
                 for item in usable]
        reports[name] = corpus_distance(pairs, system=name)

    return _write_run(manifest, usable, excluded, systems, config, threshold,
                      scores, reports, out_dir, overwrite)


def _float(x: float) -> str:
    return repr(float(x))


def _write_run(manifest, usable, excluded, systems, config, threshold, scores,
               reports, out_dir: Path, overwrite: bool) -> Path:
    out_dir.parent.mkdir(parents=True, exist_ok=True)
    tmp = out_dir.parent / f".{out_dir.name}.partial-{os.getpid()}"
    if tmp.exists():
        shutil.rmtree(tmp)
    tmp.mkdir()
    try:
        with open(tmp / "scores.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(SCORE_COLUMNS)
            rows = []
            for item in usable:
                seq_id = item.sequence.sequence_id
                for author in ["human"] + sorted(a for (s, a) in scores
                                                 if s == seq_id and a != "human"):
                    ms = scores[(seq_id, author)]
                    story_id = (item.human_story.story_id if author == "human"
                                else item.model_stories[author.split(":", 1)[1]].story_id)
                    rows.append([story_id, seq_id, author, _float(ms.coherence),
                                 _float(ms.grounding), _float(ms.repetition),
                                 ms.threshold_id, "|".join(ms.flags)])
            for row in sorted(rows, key=lambda r: (r[1], r[2])):
                writer.writerow(row)

        for name in systems:
            report = reports[name]
            with open(tmp / f"distances_{name}.csv", "w", encoding="utf-8",
                      newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(DISTANCE_COLUMNS)
                for rec in sorted(report.per_story, key=lambda r: r.sequence_id):
                    writer.writerow([rec.sequence_id, _float(rec.d_c), _float(rec.d_g),
                                     _float(rec.d_r), _float(rec.d_hm)])

        save_threshold(threshold, tmp / "threshold.json")

        summary = {
            "tool_version": TOOL_VERSION,
            "dataset": manifest.dataset,
            "split": manifest.split,
            "systems": list(systems),
            "n_items": len(usable),
            "excluded_sequences": sorted(excluded),
            "seed": config.seed,
            "config": config.to_dict(),
            "config_hash": config.hash(),
            "threshold_id": threshold.threshold_id,
            "tau": threshold.tau,
            "per_system": {
                name: {"n": r.n, "mean_d_hm": r.mean_d_hm, "mean_d_c": r.mean_d_c,
                       "mean_d_g": r.mean_d_g, "mean_d_r": r.mean_d_r,
                       "d_hm_of_means": r.d_hm_of_means}
                for name, r in reports.items()
            },
            "created_at": _utc_now(),
        }
        (tmp / "summary.json").write_text(
            json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8")

        if out_dir.exists():
            shutil.rmtree(out_dir)
        os.replace(tmp, out_dir)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    return out_dir


def load_run_report(run_dir: str | Path, system: str) -> CorpusReport:
    """Rebuild a CorpusReport from a run directory's persisted CSV."""
    from .distances import DistanceRecord
    from .errors import IncompleteRun

    run_dir = Path(run_dir)
    summary_path = run_dir / "summary.json"
    csv_path = run_dir / f"distances_{system}.csv"
    if not summary_path.exists() or not csv_path.exists():
        raise IncompleteRun(f"{run_dir} lacks summary.json or distances for {system!r}")
    summary = json.loads(summary_path.read_text(encoding="utf-8"))
    records = []
    with open(csv_path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(DistanceRecord(
                sequence_id=row["sequence_id"], system=system,
                d_c=float(row["d_c"]), d_g=float(row["d_g"]),
                d_r=float(row["d_r"]), d_hm=float(row["d_hm"])))
    stats = summary["per_system"][system]
    return CorpusReport(system=system, n=stats["n"], mean_d_hm=stats["mean_d_hm"],
                        mean_d_c=stats["mean_d_c"], mean_d_g=stats["mean_d_g"],
                        mean_d_r=stats["mean_d_r"], per_story=tuple(records),
                        threshold_id=summary["threshold_id"],
                        d_hm_of_means=stats.get("d_hm_of_means"))
