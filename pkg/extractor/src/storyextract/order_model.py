"""Sentence-follow probabilities for coherence scoring.

For each sentence after the first, estimate the probability that it follows
the concatenation of everything before it. The built-in backend is a
deterministic discourse heuristic (no learned model, no downloads). It
scores:

* referential fit: gendered/plural/object pronouns want a compatible
  antecedent in the prefix (or earlier in the same sentence);
* connective fit: continuation starters ("then", "so", ...) mark non-initial
  sentences; narrative-closure phrases ("finally", "went home", ...) read
  best over a deep prefix and poorly right after the opening;
* opener misfit: scene-setting sentences (temporal openers like "one day",
  or an event-initiating verb near the start: started, hosted, arrived, ...)
  read like a restart anywhere but the beginning;
* lexical cohesion: recency-weighted content-word overlap with the prefix;
* reintroduction: an indefinite "a/an X" whose head noun is already given
  in the prefix breaks the given-new progression;
* novelty: a sentence with zero anaphora and zero content overlap
  mid-story is weak evidence of disorder.

The weighted sum is squashed through a sigmoid, so values live strictly in
(0, 1). A learned sentence-order model can replace the heuristic through
the `albert:` backend prefix when its stack is available.
"""

from __future__ import annotations

import logging
import math
from statistics import fmean
from typing import Protocol, Sequence

from storyeval import Story

from .errors import ModelUnavailable

logger = logging.getLogger(__name__)

FEMALE_WORDS = {"[female]", "she", "bride", "grandma", "grandmother", "girl",
                "girls", "mom", "mother", "aunt", "aunts", "daughter", "sister",
                "woman", "women", "wife", "queen", "lady", "ladies"}
MALE_WORDS = {"[male]", "he", "groom", "grandpa", "grandfather", "boy", "boys",
              "dad", "father", "uncle", "uncles", "son", "brother", "man", "men",
              "husband", "king", "guy", "guys"}
PLURAL_PEOPLE_WORDS = {"kids", "children", "friends", "cousins", "parents",
                       "guests", "people", "students", "aunts", "uncles",
                       "neighbors", "players", "workers", "annotators", "crowd",
                       "team", "band", "family", "everyone", "everybody", "we",
                       "us", "they", "them", "girls", "boys", "men", "women",
                       "couple", "classmates", "siblings"}
PERSON_WORDS = FEMALE_WORDS | MALE_WORDS | PLURAL_PEOPLE_WORDS

CONTINUATION_STARTERS = {"then", "afterwards", "afterward", "later", "next",
                         "eventually", "finally", "soon", "so", "and", "but",
                         "after", "once", "by"}
CLOSER_PHRASES = ("finally", "at the end", "in the end", "at last", "afterwards",
                  "afterward", "by the end", "went home", "drove home",
                  "home tired", "home before", "home with", "ended with",
                  "to end the", "until midnight", "until dark", "at sunset",
                  "packed up", "before leaving", "late into the evening")
OPENER_PHRASES = ("one day", "one morning", "one evening", "last week",
                  "last weekend", "last year", "last summer", "last night",
                  "yesterday", "this weekend", "this summer", "on a warm",
                  "on a cold", "it all started", "the day of")
# verbs that initiate an event/scene; near the start of a sentence they mark
# a story opener, not a continuation
INCHOATIVE_VERBS = {"started", "began", "opened", "opens", "happened", "hosted",
                    "held", "threw", "invited", "visited", "planted", "practiced",
                    "needed", "gathered", "arrived", "spent", "took"}

_STOPWORDS = {"the", "a", "an", "and", "or", "of", "to", "in", "on", "at", "was",
              "were", "is", "are", "had", "have", "has", "for", "with", "it",
              "we", "they", "he", "she", "there", "be", "been", "very", "so",
              "all", "their", "her", "his", "our", "while", "from", "by",
              "until", "then", "when", "that", "this"}

DEFAULT_WEIGHTS = {"bias": 1.2, "referential": 1.2, "continuation": 0.6,
                   "closer_depth": 1.0, "closer_early": -0.8, "opener": -1.6,
                   "cohesion": 1.8, "reintroduction": -0.9, "novelty": -0.5}


def _content(tokens: Sequence[str]) -> set[str]:
    return {t for t in tokens if t not in _STOPWORDS and len(t) > 2}


class OrderModel(Protocol):
    name: str

    def follow_probability(self, prefix: Sequence[Sequence[str]],
                           sentence: Sequence[str], sentence_text: str) -> float: ...


class LexicalCohesionOrderModel:
    """Deterministic discourse-cue scorer (see module docstring)."""

    name = "lexical-cohesion"

    def __init__(self, recency: float = 0.5,
                 weights: dict[str, float] | None = None):
        self.recency = recency
        self.weights = dict(DEFAULT_WEIGHTS if weights is None else weights)

    # -- features ----------------------------------------------------------

    def _referential_fit(self, prefix_tokens: set[str],
                         sentence: Sequence[str]) -> float:
        values: list[float] = []
        seen: set[str] = set()
        for tok in sentence:
            pool = prefix_tokens | seen
            if tok in ("she", "her", "hers", "herself"):
                values.append(1.0 if pool & FEMALE_WORDS else -1.0)
            elif tok in ("he", "him", "his", "himself"):
                values.append(1.0 if pool & MALE_WORDS else -1.0)
            elif tok in ("they", "them", "their", "themselves"):
                values.append(1.0 if pool & PLURAL_PEOPLE_WORDS else -1.0)
            elif tok in ("it", "its"):
                values.append(1.0 if pool - _STOPWORDS else -0.5)
            seen.add(tok)
        return fmean(values) if values else 0.0

    @staticmethod
    def _is_opener(sentence: Sequence[str], text: str) -> bool:
        if text.startswith(OPENER_PHRASES):
            return True
        if sentence and sentence[0] in CONTINUATION_STARTERS:
            return False
        return any(v in sentence[:8] for v in INCHOATIVE_VERBS)

    def _cohesion(self, prefix: Sequence[Sequence[str]],
                  sentence: Sequence[str]) -> float:
        own = _content(sentence)
        total = weight_sum = 0.0
        for gap, tokens in enumerate(reversed(list(prefix))):
            weight = self.recency ** gap
            other = _content(tokens)
            union = own | other
            total += weight * (len(own & other) / len(union) if union else 0.0)
            weight_sum += weight
        return total / weight_sum if weight_sum else 0.0

    @staticmethod
    def _reintroduction(prefix_tokens: set[str], sentence: Sequence[str]) -> float:
        hits = 0
        for k, tok in enumerate(sentence[:-1]):
            if tok in ("a", "an", "another"):
                head = sentence[k + 1]
                if (head in prefix_tokens or head.rstrip("s") in prefix_tokens
                        or head + "s" in prefix_tokens):
                    hits += 1
        return min(1.0, float(hits))

    # -- probability -------------------------------------------------------

    def follow_probability(self, prefix: Sequence[Sequence[str]],
                           sentence: Sequence[str], sentence_text: str) -> float:
        prefix_tokens = {t for toks in prefix for t in toks}
        text = sentence_text.lower()
        own_content = _content(sentence)

        closer = any(p in text for p in CLOSER_PHRASES)
        anaphoric = any(t in ("she", "her", "he", "him", "his", "they", "them",
                              "their", "it", "its", "everyone", "[male]",
                              "[female]") for t in sentence)
        features = {
            "referential": self._referential_fit(prefix_tokens, sentence),
            "continuation": 1.0 if sentence and sentence[0] in CONTINUATION_STARTERS else 0.0,
            "closer_depth": min(1.0, (len(prefix) - 1) / 2.0) if closer else 0.0,
            "closer_early": 1.0 if closer and len(prefix) <= 1 else 0.0,
            "opener": 1.0 if self._is_opener(sentence, text) else 0.0,
            "cohesion": self._cohesion(prefix, sentence),
            "reintroduction": self._reintroduction(prefix_tokens, sentence),
            "novelty": 1.0 if (not anaphoric and own_content
                               and not own_content & prefix_tokens) else 0.0,
        }
        logit = self.weights["bias"] + sum(self.weights[name] * value
                                           for name, value in features.items())
        return 1.0 / (1.0 + math.exp(-logit))


class AlbertOrderModel:
    """Adapter for a fine-tuned sentence-order model (transformers stack)."""

    def __init__(self, model_id: str):
        try:
            import torch  # noqa: F401
            from transformers import AutoModelForSequenceClassification, AutoTokenizer
        except ImportError as exc:
            raise ModelUnavailable("transformers/torch not installed") from exc
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_id)
            self._model = AutoModelForSequenceClassification.from_pretrained(model_id)
        except Exception as exc:
            raise ModelUnavailable(f"cannot load {model_id!r}: {exc}") from exc
        self.name = model_id

    def follow_probability(self, prefix, sentence, sentence_text) -> float:
        import torch

        prefix_text = " ".join(" ".join(toks) for toks in prefix)
        inputs = self._tokenizer(prefix_text, sentence_text, return_tensors="pt",
                                 truncation="only_first", max_length=512)
        with torch.no_grad():
            logits = self._model(**inputs).logits
        probs = torch.softmax(logits, dim=-1)
        return float(probs[0, 0])


def make_order_model(model_id: str) -> OrderModel:
    """`lexical-cohesion` (default) or `albert:<model id>`."""
    if model_id == "lexical-cohesion":
        return LexicalCohesionOrderModel()
    if model_id.startswith("albert:"):
        return AlbertOrderModel(model_id.split(":", 1)[1])
    raise ModelUnavailable(f"unknown order-model backend {model_id!r}")


def coherence_probabilities(story: Story, model: OrderModel | None = None,
                            context_limit: int = 256) -> list[float]:
    """One follow probability per sentence i >= 2, in [0, 1].

    Prefixes longer than `context_limit` tokens are truncated from the left
    (oldest sentences dropped first) and the truncation is logged.
    """
    model = model or LexicalCohesionOrderModel()
    probs: list[float] = []
    for i in range(1, len(story.sentences)):
        prefix = [list(s.tokens) for s in story.sentences[:i]]
        while len(prefix) > 1 and sum(len(t) for t in prefix) > context_limit:
            prefix.pop(0)
            logger.warning("story %s: prefix for sentence %d truncated from the left",
                           story.story_id, i + 1)
        p = model.follow_probability(prefix, list(story.sentences[i].tokens),
                                     story.sentences[i].text)
        probs.append(min(1.0, max(0.0, p)))
    return probs
