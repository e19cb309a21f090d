"""Concreteness weights for noun phrases.

Lexicon ratings live on a 1-5 scale; an NP's weight is the mean rating of
its words divided by 5, with out-of-lexicon words contributing the neutral
mid-scale rating. Weights therefore always land in [0, 1], and fully
unknown NPs sit at exactly 0.5.
"""

from __future__ import annotations

from storyeval import tokenize

from .resources import NEUTRAL_RATING, concreteness_lexicon


def np_weight(np_text: str, lexicon: dict[str, float] | None = None) -> float:
    lexicon = lexicon if lexicon is not None else concreteness_lexicon()
    tokens = tokenize(np_text)
    if not tokens:
        return NEUTRAL_RATING / 5.0
    total = sum(lexicon.get(tok, NEUTRAL_RATING) for tok in tokens)
    return total / len(tokens) / 5.0


def concreteness_weights(np_texts: list[str],
                         lexicon: dict[str, float] | None = None) -> list[float]:
    lexicon = lexicon if lexicon is not None else concreteness_lexicon()
    return [np_weight(text, lexicon) for text in np_texts]
