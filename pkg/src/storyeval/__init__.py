"""Reference-free visual storytelling evaluation.

Scores stories on visual grounding, coherence, and repetition from
precomputed feature bundles, and quantifies story quality as the distance
between model-generated and human-written stories for the same image
sequence.
"""

__version__ = "0.1.0"

from .coherence import CoherenceInput, CoherenceResult, coherence_score
from .corpus import (Judgment, Manifest, ManifestItem, load_manifest,
                     read_bundles, read_journal, resolve_verdict, save_manifest,
                     write_bundles)
from .distances import (CorpusReport, DistanceRecord, aggregate_distance,
                        corpus_distance, distance_record, metric_distances,
                        prompt_variant_average)
from .grounding import (CorpusThreshold, GroundingBreakdown, corpus_threshold,
                        grounding_score, np_alignment)
from .repetition import (RepetitionBreakdown, RepetitionConfig,
                         inter_sentence_scores, intra_sentence_score,
                         jaccard_similarity, repetition_score)
from .report import render_report
from .runner import RunConfig, load_run_report, run_evaluation, score_manifest
from .stats import (TTestResult, distances_by_verdict, judgment_tally,
                    sample_by_distance, welch_t_test)
from .stories import (BoundingBox, BoxFeature, FeatureBundle, ImageRef,
                      ImageSequence, MetricScores, NPFeature, NPSpan, Sentence,
                      Story, ValidationReport, split_sentences, tokenize,
                      validate_bundle)
