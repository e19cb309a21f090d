"""Named-entity replacement and story normalization.

Recognized person names become gender placeholders ([male], [female]) and
known place/organization names become entity-type tokens ([location],
[organization]), after which the text is lowercased and segmented with the
story-model rules. Recognition is gazetteer-based and deterministic: no
learned NER. Multi-word entries match longest-first, an honorific forces a
person reading, and a matched first name absorbs one following capitalized
surname-like token.
"""

from __future__ import annotations

import re
import string

from storyeval import Story

from . import resources

_TOKEN = re.compile(r"\S+")
_EDGE = string.punctuation
_HONORIFICS_MALE = {"mr", "mr.", "mister", "sir"}
_HONORIFICS_FEMALE = {"mrs", "mrs.", "ms", "ms.", "miss", "madam"}
_MAX_ENTITY_WORDS = 3


def _core(token: str) -> str:
    return token.strip(_EDGE)


def _is_capitalized(token: str) -> bool:
    core = _core(token)
    return bool(core) and core[0].isupper()


def _is_common_word(word: str) -> bool:
    # sentence-initial capitals are ambiguous; keep ordinary words as-is
    from .chunker import CLOSED_CLASS_TAGS  # late import, avoids cycle
    lower = word.lower()
    return lower in resources.pos_lexicon() or lower in CLOSED_CLASS_TAGS


def replace_entities(text: str) -> str:
    """Swap recognized named entities for placeholder tokens, keep the rest."""
    matches = list(_TOKEN.finditer(text))
    words = [m.group(0) for m in matches]
    replaced: list[str] = []
    i = 0
    while i < len(words):
        token = words[i]
        core = _core(token)
        lower = core.lower()

        # honorific + capitalized name: both tokens collapse to the placeholder
        if lower in (_HONORIFICS_MALE | _HONORIFICS_FEMALE) and i + 1 < len(words) \
                and _is_capitalized(words[i + 1]):
            placeholder = "[male]" if lower in _HONORIFICS_MALE else "[female]"
            replaced.append(_with_edges(words[i + 1], placeholder))
            i += 2
            continue

        if _is_capitalized(token):
            consumed, placeholder = _match_entity(words, i)
            if placeholder is not None:
                replaced.append(_with_edges(words[i + consumed - 1], placeholder))
                i += consumed
                continue
        replaced.append(token)
        i += 1
    return " ".join(replaced)


def _match_entity(words: list[str], i: int) -> tuple[int, str | None]:
    sentence_initial = i == 0 or words[i - 1].endswith((".", "!", "?", '"', ")"))
    # longest multi-word match over locations and organizations
    for width in range(min(_MAX_ENTITY_WORDS, len(words) - i), 0, -1):
        phrase = " ".join(_core(w).lower() for w in words[i:i + width])
        if not phrase:
            continue
        if phrase in resources.locations() or phrase in resources.organizations():
            if width == 1 and sentence_initial and _is_common_word(phrase):
                continue
            kind = "[location]" if phrase in resources.locations() else "[organization]"
            return width, kind

    first = _core(words[i]).lower()
    gender = ("[male]" if first in resources.male_names()
              else "[female]" if first in resources.female_names() else None)
    if gender is None:
        return 0, None
    if sentence_initial and _is_common_word(first):
        return 0, None
    # absorb one capitalized surname-like follower ("John Smith" -> [male]),
    # but never across punctuation attached to the first name
    if i + 1 < len(words) and _is_capitalized(words[i + 1]) \
            and words[i].rstrip(_EDGE) == words[i] \
            and not _is_common_word(_core(words[i + 1]).lower()) \
            and _core(words[i + 1]).lower() not in resources.locations() \
            and _core(words[i + 1]).lower() not in resources.organizations():
        return 2, gender
    return 1, gender


def _with_edges(last_token: str, placeholder: str) -> str:
    # keep the punctuation attached to the final replaced token: "Paris." -> "[location]."
    stripped = last_token.rstrip(_EDGE)
    trailing = last_token[len(stripped):]
    # bracketed placeholders never carry leading punctuation ("(Paris" is rare
    # enough that dropping the paren reads better than "([location]")
    return placeholder + trailing


def preprocess_text(raw_text: str, story_id: str, sequence_id: str,
                    author: str, lowercase: bool = True) -> Story:
    """Entity replacement + lowercasing + story-model segmentation."""
    text = replace_entities(raw_text)
    if lowercase:
        text = text.lower()
    return Story.from_text(story_id, sequence_id, author, text)
