"""Concreteness lexicon weighting."""

import pytest

from storyextract import concreteness_weights, np_weight
from storyextract.errors import LexiconMissing
from storyextract.resources import concreteness_lexicon


def test_dog_rating_read_from_lexicon():
    # lexicon stores 4.85 on the 1-5 scale
    assert np_weight("dog") == pytest.approx(4.85 / 5)


def test_all_out_of_lexicon_is_neutral():
    assert np_weight("xyzzy frobnicator") == pytest.approx(0.5)


def test_abstract_below_concrete():
    assert np_weight("idea") < np_weight("table")


def test_multiword_mean():
    lex = concreteness_lexicon()
    expected = (lex["fire"] + lex["pit"]) / 2 / 5
    assert np_weight("fire pit") == pytest.approx(expected)


def test_determiners_count_as_neutral_words():
    lex = concreteness_lexicon()
    # "the" is out-of-lexicon -> neutral 2.5 participates in the mean
    expected = (2.5 + lex["dog"]) / 2 / 5
    assert np_weight("the dog") == pytest.approx(expected)


def test_placeholders_have_ratings():
    assert np_weight("[male]") > 0.9
    assert np_weight("[female]") > 0.85


def test_weights_in_unit_interval():
    lex = concreteness_lexicon()
    for word, rating in lex.items():
        assert 1.0 <= rating <= 5.0, word
    texts = ["fire pit", "a wonderful idea", "the big red balloon", "zzz qqq"]
    for w in concreteness_weights(texts):
        assert 0.0 <= w <= 1.0


def test_missing_lexicon_file_raises(tmp_path):
    with pytest.raises(LexiconMissing):
        concreteness_lexicon(str(tmp_path / "absent.tsv"))


def test_malformed_lexicon_raises(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("word without rating\n")
    with pytest.raises(LexiconMissing):
        concreteness_lexicon(str(bad))
