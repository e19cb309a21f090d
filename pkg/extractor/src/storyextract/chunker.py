"""Rule-based noun-phrase chunking with character-span anchors.

A small closed-class table plus a packaged open-class lexicon tag each
token; unknown words default to NOUN (with -ly/-ing/-ed suffix overrides),
which is the right bias for concrete narrative text. Chunks follow the
classic pattern

    NP := (DET | POSS | NUM)? (ADJ | NUM | NOUN)* NOUN

matched greedily left to right; a chunk must end in a noun. Pronouns are
excluded by default (they carry nothing groundable) but can be kept.
"""

from __future__ import annotations

import re
import string

from storyeval import NPSpan, Sentence, Story

from .resources import pos_lexicon

_EDGE = string.punctuation
_EDGE_KEEP_BRACKETS = "".join(c for c in string.punctuation if c not in "[]")
_PLACEHOLDER = re.compile(r"\[[a-z_]+\]")
_TOKEN = re.compile(r"\S+")
_NUMBER = re.compile(r"\d+(\.\d+)?")

DETERMINERS = {"the", "a", "an", "this", "that", "these", "those", "some", "any",
               "no", "every", "each", "all", "both", "another", "either", "neither",
               "such", "what", "which"}
POSSESSIVES = {"my", "our", "your", "his", "her", "its", "their"}
PRONOUNS = {"i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them",
            "mine", "yours", "hers", "ours", "theirs", "myself", "himself",
            "herself", "itself", "ourselves", "themselves", "who", "whom",
            "someone", "everyone", "anyone", "something", "everything", "nothing",
            "anything", "somebody", "everybody", "nobody"}
PREPOSITIONS = {"of", "in", "on", "at", "to", "for", "with", "from", "by", "about",
                "into", "over", "under", "after", "before", "between", "through",
                "during", "around", "against", "near", "without", "within", "along",
                "across", "behind", "beside", "above", "below", "off", "onto",
                "toward", "towards", "past", "until", "up", "down", "out"}
CONJUNCTIONS = {"and", "or", "but", "nor", "so", "yet", "because", "although",
                "while", "if", "when", "as", "since", "though", "unless", "not"}
NUMBER_WORDS = {"one", "two", "three", "four", "five", "six", "seven", "eight",
                "nine", "ten", "eleven", "twelve", "twenty", "thirty", "fifty",
                "hundred", "thousand", "couple", "several", "few", "many", "lots"}

CLOSED_CLASS_TAGS: dict[str, str] = {}
for _w in DETERMINERS:
    CLOSED_CLASS_TAGS[_w] = "DET"
for _w in POSSESSIVES:
    CLOSED_CLASS_TAGS[_w] = "POSS"
for _w in PRONOUNS:
    CLOSED_CLASS_TAGS[_w] = "PRON"
for _w in PREPOSITIONS:
    CLOSED_CLASS_TAGS.setdefault(_w, "PREP")
for _w in CONJUNCTIONS:
    CLOSED_CLASS_TAGS.setdefault(_w, "CONJ")

_ING_EXCEPTION_SUFFIXES = ("thing",)  # something/anything handled as pronouns


def tag_token(token: str, next_token: str | None = None) -> str:
    """Tag one lowercase token; `next_token` disambiguates possessives."""
    if _PLACEHOLDER.fullmatch(token):
        return "NOUN"
    if token in POSSESSIVES:
        if next_token is not None and tag_token(next_token) in ("ADJ", "NOUN", "NUM"):
            return "POSS"
        return "PRON"
    if token in CLOSED_CLASS_TAGS:
        return CLOSED_CLASS_TAGS[token]
    if token in NUMBER_WORDS or _NUMBER.fullmatch(token):
        return "NUM"
    lexicon = pos_lexicon()
    if token in lexicon:
        return lexicon[token]
    if token.endswith("'s") and token[:-2] in lexicon:
        base = lexicon[token[:-2]]
        return "NOUN" if base == "NOUN" else base
    if token.endswith("ly") and len(token) > 4:
        return "ADV"
    if "-" in token and token.endswith(("ed", "ing")):
        return "ADJ"
    if token.endswith("ing") and len(token) > 5 and not token.endswith(_ING_EXCEPTION_SUFFIXES):
        return "VERB"
    if token.endswith("ed") and len(token) > 4:
        return "VERB"
    return "NOUN"


def token_spans(sentence_text: str) -> list[tuple[str, int, int]]:
    """(token, start, end) triples aligned with the story-model tokenizer.

    Tokens match storyeval.tokenize exactly; spans cover the stripped core
    of each whitespace chunk within the sentence text.
    """
    spans: list[tuple[str, int, int]] = []
    for match in _TOKEN.finditer(sentence_text):
        raw = match.group(0).lower()
        start = match.start()
        candidate = raw.strip(_EDGE_KEEP_BRACKETS)
        left_trim = len(raw) - len(raw.lstrip(_EDGE_KEEP_BRACKETS))
        if _PLACEHOLDER.fullmatch(candidate):
            spans.append((candidate, start + left_trim,
                          start + left_trim + len(candidate)))
            continue
        stripped = candidate.strip(_EDGE)
        if not stripped:
            continue
        offset = left_trim + len(candidate) - len(candidate.lstrip(_EDGE))
        spans.append((stripped, start + offset, start + offset + len(stripped)))
    return spans


_HEAD_TAGS = {"NOUN"}
_MOD_TAGS = {"ADJ", "NUM", "NOUN"}
_OPEN_TAGS = {"DET", "POSS", "NUM", "ADJ", "NOUN"}


def chunk_sentence(sentence: Sentence, include_pronouns: bool = False) -> list[NPSpan]:
    """Non-overlapping NP spans (character offsets into the sentence text)."""
    spans = token_spans(sentence.text)
    tags = [tag_token(tok, spans[k + 1][0] if k + 1 < len(spans) else None)
            for k, (tok, _, _) in enumerate(spans)]

    nps: list[NPSpan] = []
    k = 0
    while k < len(spans):
        tag = tags[k]
        if include_pronouns and tag == "PRON":
            nps.append(NPSpan(start=spans[k][1], end=spans[k][2]))
            k += 1
            continue
        if tag not in _OPEN_TAGS:
            k += 1
            continue
        run_start = k
        k += 1
        while k < len(spans) and tags[k] in _MOD_TAGS:
            k += 1
        head = None  # index of the last noun in the run
        for j in range(k - 1, run_start - 1, -1):
            if tags[j] in _HEAD_TAGS:
                head = j
                break
        if head is None:
            continue
        nps.append(NPSpan(start=spans[run_start][1], end=spans[head][2]))
    return nps


def extract_nps(story: Story, include_pronouns: bool = False) -> list[list[NPSpan]]:
    """Per-sentence NP spans for a segmented story."""
    return [chunk_sentence(s, include_pronouns) for s in story.sentences]


def annotate_story(story: Story, include_pronouns: bool = False) -> Story:
    """Return a copy of the story with chunker NP spans attached."""
    spans = extract_nps(story, include_pronouns)
    return Story.from_text(story.story_id, story.sequence_id, story.author,
                           story.text, nps=spans)
