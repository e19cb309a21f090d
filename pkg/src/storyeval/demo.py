"""Deterministic synthetic corpus for tests, demos, and property suites.

Builds a small manifest plus matching feature bundles without any model
inference: embeddings are seeded random unit vectors, box embeddings are
noisy copies of the human stories' NP embeddings (so grounding behaves like
it does on real data), and follow probabilities are seeded draws with human
stories biased higher than model ones.
"""

from __future__ import annotations

import math
import random
from typing import Iterable

from .corpus import BundleFileMeta, Manifest, ManifestItem
from .stories import (BoundingBox, BoxFeature, FeatureBundle, ImageRef,
                      ImageSequence, NPFeature, NPSpan, Story, split_sentences)

_NOUNS = ["fire pit", "old barn", "birthday cake", "river bank", "tall tree",
          "red kite", "picnic table", "small dog", "street market", "stone bridge",
          "camp tent", "city park", "school bus", "flower stand", "band stage"]
_OPENERS = ["we started the day at the {a}.", "the family gathered near the {a}.",
            "everyone met by the {a} early on."]
_MIDDLES = ["the {a} stood right next to the {b}.", "[male] took pictures of the {a}.",
            "the kids ran from the {a} to the {b}.", "someone set up the {a} by the {b}.",
            "[female] pointed at the {a} and laughed."]
_CLOSERS = ["at the end we walked past the {a} and went home.",
            "finally the {a} lit up and everyone cheered.",
            "it was a long day but the {a} made it worth it."]


def _unit(vector: list[float]) -> tuple[float, ...]:
    norm = math.sqrt(sum(x * x for x in vector))
    return tuple(x / norm for x in vector)


def _random_unit(rng: random.Random, dim: int) -> tuple[float, ...]:
    return _unit([rng.gauss(0.0, 1.0) for _ in range(dim)])


def _jitter(rng: random.Random, base: tuple[float, ...], scale: float) -> tuple[float, ...]:
    return _unit([x + rng.gauss(0.0, scale) for x in base])


def _spans_for(text: str, phrases: Iterable[str]) -> list[NPSpan]:
    spans = []
    cursor = 0
    for phrase in phrases:
        start = text.index(phrase, cursor)
        spans.append(NPSpan(start=start, end=start + len(phrase)))
        cursor = start + len(phrase)
    return spans


def _make_story(rng: random.Random, story_id: str, sequence_id: str,
                author: str) -> Story:
    nouns = rng.sample(_NOUNS, 4)
    lines = [rng.choice(_OPENERS).format(a=nouns[0])]
    for template in rng.sample(_MIDDLES, 3):
        lines.append(template.format(a=rng.choice(nouns[:3]), b=nouns[3]))
    lines.append(rng.choice(_CLOSERS).format(a=nouns[rng.randrange(4)]))
    text = " ".join(lines)

    sentences = split_sentences(text)
    per_sentence_spans = []
    for sent in sentences:
        present = sorted({n for n in nouns if n in sent.text},
                         key=lambda n: sent.text.index(n))
        per_sentence_spans.append(_spans_for(sent.text, present))
    return Story.from_text(story_id, sequence_id, author, text, nps=per_sentence_spans)


def build_demo_corpus(n_items: int = 8, systems: tuple[str, ...] = ("alpha", "beta"),
                      embedding_dim: int = 16, seed: int = 7,
                      ) -> tuple[Manifest, dict[str, FeatureBundle], BundleFileMeta]:
    rng = random.Random(seed)
    items: list[ManifestItem] = []
    bundles: dict[str, FeatureBundle] = {}

    for i in range(n_items):
        seq_id = f"seq{i:03d}"
        human = _make_story(rng, f"{seq_id}-human", seq_id, "human")
        model_stories = {name: _make_story(rng, f"{seq_id}-{name}", seq_id,
                                           f"system:{name}")
                         for name in systems}

        # Box embeddings orbit the human NP embeddings so alignments spread
        # realistically around the eventual corpus threshold.
        human_np_embs = [_random_unit(rng, embedding_dim) for _ in human.noun_phrases()]
        anchor_pool = human_np_embs or [_random_unit(rng, embedding_dim)]

        images = []
        box_feats: list[BoxFeature] = []
        for img_idx in range(5):
            image_id = f"{seq_id}-img{img_idx}"
            boxes = []
            for box_idx in range(rng.randint(1, 3)):
                boxes.append(BoundingBox(x=10.0 * box_idx, y=5.0, w=40.0, h=30.0,
                                         label=rng.choice(_NOUNS)))
                box_feats.append(BoxFeature(
                    image_id=image_id, box_index=box_idx,
                    embedding=_jitter(rng, rng.choice(anchor_pool), 0.6)))
            images.append(ImageRef(image_id=image_id, uri=f"img/{image_id}.jpg",
                                   boxes=tuple(boxes), width=640, height=480))
        sequence = ImageSequence(sequence_id=seq_id, images=tuple(images))

        def bundle_for(story: Story, np_embs: list[tuple[float, ...]] | None,
                       prob_lo: float, prob_hi: float) -> FeatureBundle:
            nps = story.noun_phrases()
            if np_embs is None:
                np_embs = [_jitter(rng, rng.choice(anchor_pool), 0.9) for _ in nps]
            return FeatureBundle(
                story_id=story.story_id,
                embedding_dim=embedding_dim,
                np_features=tuple(
                    NPFeature(np_index=k, embedding=emb,
                              concreteness_weight=round(rng.uniform(0.4, 1.0), 3))
                    for k, emb in enumerate(np_embs)),
                box_features=tuple(box_feats),
                follow_probs=tuple(round(rng.uniform(prob_lo, prob_hi), 4)
                                   for _ in range(len(story.sentences) - 1)),
            )

        bundles[human.story_id] = bundle_for(human, human_np_embs, 0.82, 0.99)
        for name, story in model_stories.items():
            bundles[story.story_id] = bundle_for(story, None, 0.45, 0.95)

        items.append(ManifestItem(sequence=sequence, human_story=human,
                                  model_stories=model_stories))

    manifest = Manifest(dataset="vist-demo", split="test", items=tuple(items))
    meta = BundleFileMeta(embedding_dim=embedding_dim, extractor_version="demo-0",
                          concreteness_lexicon_version="demo-0")
    return manifest, bundles, meta
