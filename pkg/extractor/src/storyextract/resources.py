"""Packaged data files: gazetteers, lexicons, prompt templates."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import LexiconMissing

CONCRETENESS_VERSION = "subset-1"
NEUTRAL_RATING = 2.5  # out-of-lexicon words count as mid-scale


def _data_text(name: str) -> str:
    return resources.files("storyextract").joinpath("data", name).read_text("utf-8")


@lru_cache(maxsize=None)
def gazetteer(name: str) -> frozenset[str]:
    """Lowercased multi-word entries from one gazetteer file."""
    entries = set()
    for line in _data_text(name).splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            entries.add(line)
    return frozenset(entries)


def male_names() -> frozenset[str]:
    return gazetteer("names_male.txt")


def female_names() -> frozenset[str]:
    return gazetteer("names_female.txt")


def locations() -> frozenset[str]:
    return gazetteer("locations.txt")


def organizations() -> frozenset[str]:
    return gazetteer("organizations.txt")


@lru_cache(maxsize=None)
def pos_lexicon() -> dict[str, str]:
    lexicon: dict[str, str] = {}
    for line in _data_text("pos_lexicon.tsv").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, tag = line.split("\t")
        lexicon[word] = tag
    return lexicon


@lru_cache(maxsize=None)
def concreteness_lexicon(path: str | None = None) -> dict[str, float]:
    """word -> rating on the 1-5 scale; packaged subset unless a path is given."""
    try:
        text = Path(path).read_text("utf-8") if path else _data_text("concreteness.tsv")
    except (OSError, FileNotFoundError) as exc:
        raise LexiconMissing(f"cannot read concreteness lexicon: {exc}") from exc
    ratings: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            word, rating = line.split("\t")
            ratings[word] = float(rating)
        except ValueError as exc:
            raise LexiconMissing(f"lexicon line {lineno} malformed: {line!r}") from exc
    if not ratings:
        raise LexiconMissing("concreteness lexicon is empty")
    return ratings


@lru_cache(maxsize=None)
def prompt_template(setting_family: str, variant: str) -> str:
    """Verbatim template text; families are 'visual' and 'linguistic'."""
    ref = resources.files("storyextract").joinpath("templates", setting_family,
                                                   f"{variant}.txt")
    return ref.read_text("utf-8")
