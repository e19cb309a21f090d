"""Assemble feature bundles: NP spans, embeddings, weights, follow probs.

Output conforms to the storyeval bundle schema; every emitted bundle passes
storyeval.validate_bundle by construction (asserted in tests, not here).
"""

from __future__ import annotations

import logging
from pathlib import Path

from storyeval import (FeatureBundle, Manifest, Story, save_manifest,
                       validate_bundle, write_bundles)
from storyeval.corpus import BundleFileMeta
from storyeval.stories import BoxFeature, ImageSequence, NPFeature

from .chunker import annotate_story
from .concreteness import np_weight
from .config import ExtractorConfig
from .embeddings import box_label_text, make_embedder
from .order_model import coherence_probabilities, make_order_model
from .resources import CONCRETENESS_VERSION, concreteness_lexicon

logger = logging.getLogger(__name__)


class Extractor:
    """Holds the configured backends; reusable across stories."""

    def __init__(self, config: ExtractorConfig | None = None):
        self.config = config or ExtractorConfig()
        self.embedder = make_embedder(self.config.embedding_model_id,
                                      dim=self.config.embedding_dim)
        self.order_model = make_order_model(self.config.sentence_order_model_id)
        self.lexicon = concreteness_lexicon(
            str(self.config.concreteness_lexicon_path)
            if self.config.concreteness_lexicon_path else None)

    def enrich_story(self, story: Story) -> Story:
        """Attach chunker NP spans unless the story already carries spans."""
        if story.np_count > 0:
            return story
        return annotate_story(story, include_pronouns=self.config.include_pronoun_nps)

    def box_features(self, sequence: ImageSequence) -> tuple[BoxFeature, ...]:
        feats = []
        for image in sequence.images:
            for idx, box in enumerate(image.boxes):
                text = box_label_text(box.label, image.image_id, idx)
                feats.append(BoxFeature(image_id=image.image_id, box_index=idx,
                                        embedding=self.embedder.embed_text(text)))
        if not feats:
            logger.warning("sequence %s has no boxes; grounding will exclude it",
                           sequence.sequence_id)
        return tuple(feats)

    def extract_bundle(self, story: Story, sequence: ImageSequence,
                       box_features: tuple[BoxFeature, ...] | None = None,
                       ) -> tuple[Story, FeatureBundle]:
        story = self.enrich_story(story)
        np_texts = story.np_texts()
        bundle = FeatureBundle(
            story_id=story.story_id,
            embedding_dim=self.embedder.dim,
            np_features=tuple(
                NPFeature(np_index=k, embedding=self.embedder.embed_text(text),
                          concreteness_weight=np_weight(text, self.lexicon))
                for k, text in enumerate(np_texts)),
            box_features=(box_features if box_features is not None
                          else self.box_features(sequence)),
            follow_probs=tuple(coherence_probabilities(
                story, self.order_model, self.config.order_context_limit)),
        )
        return story, bundle

    def file_meta(self) -> BundleFileMeta:
        return BundleFileMeta(
            embedding_dim=self.embedder.dim,
            extractor_version=f"{self.config.extractor_version}+{self.embedder.name}"
                              f"+{self.order_model.name}",
            concreteness_lexicon_version=CONCRETENESS_VERSION,
        )


def extract_corpus(manifest: Manifest, config: ExtractorConfig | None,
                   bundles_path: str | Path,
                   enriched_manifest_path: str | Path | None = None) -> int:
    """Extract every story in a manifest; returns the bundle count.

    Writes the bundle JSONL (and optionally the NP-annotated manifest, which
    scoring needs so bundle indices and story spans line up).
    """
    extractor = Extractor(config)
    bundles = []
    enriched_items = []
    for item in manifest.items:
        shared_boxes = extractor.box_features(item.sequence)
        human, human_bundle = extractor.extract_bundle(item.human_story,
                                                       item.sequence, shared_boxes)
        bundles.append(human_bundle)
        models = {}
        for name, story in item.model_stories.items():
            enriched, bundle = extractor.extract_bundle(story, item.sequence,
                                                        shared_boxes)
            models[name] = enriched
            bundles.append(bundle)
        enriched_items.append(type(item)(sequence=item.sequence, human_story=human,
                                         model_stories=models))

    write_bundles(bundles, extractor.file_meta(), bundles_path)
    if enriched_manifest_path is not None:
        save_manifest(Manifest(dataset=manifest.dataset, split=manifest.split,
                               items=tuple(enriched_items)), enriched_manifest_path)
    return len(bundles)
