"""Redundancy scoring: hand-counted examples, brute-force oracle, properties."""

import random

import pytest
from hypothesis import given, strategies as st

from oracles import brute_force_final, story_from_token_lists
from storyeval import (RepetitionConfig, Story, inter_sentence_scores,
                       intra_sentence_score, jaccard_similarity, repetition_score)
from storyeval.repetition import DESK_CHECK_CLOSING_CONFIG
from storyeval.stories import Sentence


class TestJaccard:
    def test_identical_sets(self):
        assert jaccard_similarity(["a", "b", "c"], ["a", "b", "c"]) == 1.0

    def test_disjoint(self):
        assert jaccard_similarity(["a", "b"], ["c", "d"]) == 0.0

    def test_hand_counted_half(self):
        # intersection {the, sat} = 2, union {the, cat, sat, dog} = 4
        assert jaccard_similarity(["the", "cat", "sat"], ["the", "dog", "sat"]) == 0.5

    def test_both_empty(self):
        assert jaccard_similarity([], []) == 0.0

    def test_total_denominator_variant(self):
        # intersection 2, |A| + |B| = 6
        assert jaccard_similarity(["the", "cat", "sat"], ["the", "dog", "sat"],
                                  denominator="total") == pytest.approx(2 / 6)

    @given(st.lists(st.sampled_from("abcdefg"), max_size=8),
           st.lists(st.sampled_from("abcdefg"), max_size=8))
    def test_symmetric_and_bounded(self, a, b):
        val = jaccard_similarity(a, b)
        assert val == jaccard_similarity(b, a)
        assert 0.0 <= val <= 1.0
        if val == 1.0:
            assert set(a) == set(b) and a

    @given(st.lists(st.sampled_from("abcdefg"), min_size=1, max_size=8))
    def test_self_similarity_is_one(self, a):
        assert jaccard_similarity(a, a) == 1.0


class TestInterSentence:
    def test_two_identical_sentences(self):
        story = story_from_token_lists([["we", "ran"], ["we", "ran"]])
        assert inter_sentence_scores(story) == [1.0]

    def test_hand_enumerated_three_sentences(self):
        story = story_from_token_lists([["a", "b"], ["c", "d"], ["a", "b"]])
        assert inter_sentence_scores(story) == [0.0, 0.5]

    def test_single_sentence_is_empty(self):
        story = story_from_token_lists([["just", "one"]])
        assert inter_sentence_scores(story) == []

    def test_prefix_mode(self):
        story = story_from_token_lists([["a", "b"], ["c", "d"], ["a", "c"]])
        config = RepetitionConfig(inter_mode="prefix")
        # prefix of s3 is {a, b, c, d}; overlap {a, c}, union size 4
        assert inter_sentence_scores(story, config) == [0.0, 0.5]

    def test_max_aggregation(self):
        story = story_from_token_lists([["a", "b"], ["c", "d"], ["a", "b"]])
        config = RepetitionConfig(inter_aggregate="max")
        assert inter_sentence_scores(story, config) == [0.0, 1.0]


class TestIntraSentence:
    def test_seven_tokens_ineligible(self):
        sent = Sentence(text="x", tokens=tuple("abcdefg"))
        assert intra_sentence_score(sent) is None

    def test_identical_chunks(self):
        sent = Sentence(text="x", tokens=("a", "b", "c", "d", "a", "b", "c", "d"))
        assert intra_sentence_score(sent) == 1.0

    def test_disjoint_chunks(self):
        sent = Sentence(text="x", tokens=tuple("abcdefgh"))
        assert intra_sentence_score(sent) == 0.0

    def test_remainder_dropped_by_default(self):
        # 11 tokens -> two full chunks, remainder of 3 dropped
        sent = Sentence(text="x", tokens=tuple("abcdefgh") + ("a", "b", "c"))
        assert intra_sentence_score(sent) == 0.0

    def test_remainder_kept_when_configured(self):
        sent = Sentence(text="x", tokens=tuple("abcdefgh") + ("a", "b", "c"))
        config = RepetitionConfig(keep_remainder=True)
        # chunks {a..d}, {e..h}, {a,b,c}: pairwise 0, 0, 3/5... overlap of
        # {a,b,c,d} and {a,b,c} is 3, union 4 -> 0.75; {e..h} vs {a,b,c} -> 0
        assert intra_sentence_score(sent, config) == pytest.approx((0.0 + 0.75 + 0.0) / 3)


class TestRepetitionScore:
    def test_two_identical_short_sentences_score_zero(self):
        story = story_from_token_lists([["we", "ran"], ["we", "ran"]])
        assert repetition_score(story).final == 0.0

    def test_no_evidence_scores_one(self):
        story = story_from_token_lists([["only", "one", "short", "sentence"]])
        assert repetition_score(story).final == 1.0

    def test_breakdown_consistency(self):
        story = story_from_token_lists(
            [list("abcd"), list("abce"), list("abcdefgh")])
        breakdown = repetition_score(story)
        pooled = list(breakdown.inter_scores) + list(breakdown.intra_scores)
        assert breakdown.final == pytest.approx(1.0 - sum(pooled) / len(pooled))

    def test_glacnet_within_tolerance_under_default(self, desk_stories):
        text, (_, _, expected) = desk_stories["glacnet"]
        story = Story.from_text("glac", "q", "system:glacnet", text)
        assert abs(repetition_score(story).final - expected) <= 0.05

    def test_human_story_close_under_default(self, desk_stories):
        text, (_, _, expected) = desk_stories["human"]
        story = Story.from_text("h", "q", "human", text)
        assert abs(repetition_score(story).final - expected) <= 0.05

    def test_arel_gap_under_default_is_documented(self, desk_stories):
        # Known residual gap under the default reading; the closing
        # configuration is asserted in the acceptance suite.
        text, (_, _, expected) = desk_stories["arel"]
        story = Story.from_text("arel", "q", "system:arel", text)
        default_gap = abs(repetition_score(story).final - expected)
        assert default_gap > 0.05  # if this starts passing, drop the deviation note
        closing = repetition_score(story, DESK_CHECK_CLOSING_CONFIG).final
        assert abs(closing - expected) <= 0.05


WORDS = ["a", "b", "c", "d", "e", "f", "g", "h"]


def test_brute_force_oracle_equivalence_10k():
    rng = random.Random(12345)
    for case in range(10_000):
        token_lists = [[rng.choice(WORDS) for _ in range(rng.randint(1, 12))]
                       for _ in range(rng.randint(1, 4))]
        story = story_from_token_lists(token_lists)
        got = repetition_score(story).final
        want = brute_force_final(token_lists)
        assert abs(got - want) <= 1e-12, (case, token_lists, got, want)


def test_brute_force_oracle_equivalence_closing_config():
    rng = random.Random(54321)
    for _ in range(1_000):
        token_lists = [[rng.choice(WORDS) for _ in range(rng.randint(1, 12))]
                       for _ in range(rng.randint(1, 4))]
        story = story_from_token_lists(token_lists)
        got = repetition_score(story, DESK_CHECK_CLOSING_CONFIG).final
        want = brute_force_final(token_lists, keep_remainder=True, aggregate="max")
        assert abs(got - want) <= 1e-12


token_lists_strategy = st.lists(
    st.lists(st.sampled_from(WORDS), min_size=1, max_size=12),
    min_size=1, max_size=4)


@given(token_lists_strategy)
def test_final_always_in_unit_interval(token_lists):
    story = story_from_token_lists(token_lists)
    for config in (RepetitionConfig(), DESK_CHECK_CLOSING_CONFIG,
                   RepetitionConfig(inter_mode="prefix"),
                   RepetitionConfig(denominator="total")):
        assert 0.0 <= repetition_score(story, config).final <= 1.0


# Duplicate-appending monotonicity is narrower than it looks: mean pooling
# dilutes whenever the duplicate's own averaged overlap is below the story's
# existing mean (e.g. appending "a." to "a b. a b. a."), and even under max
# aggregation a duplicate long enough to carry an intra score (>= 8 tokens)
# adds that value too. It provably holds for max aggregation when the
# duplicated sentence is intra-ineligible: the only added value is an inter
# max of 1.0, which cannot lower the pooled mean.
@given(token_lists_strategy)
def test_duplicating_a_short_sentence_never_raises_final_under_max(token_lists):
    config = RepetitionConfig(inter_aggregate="max")
    token_lists = token_lists[:-1] + [token_lists[-1][:7]]
    story = story_from_token_lists(token_lists)
    duplicated = story_from_token_lists(token_lists + [token_lists[-1]])
    assert (repetition_score(duplicated, config).final
            <= repetition_score(story, config).final + 1e-12)


def test_max_aggregation_long_duplicate_counterexample():
    base = [["a", "b"], ["a", "b"], ["a"] * 7 + ["b"]]
    config = RepetitionConfig(inter_aggregate="max")
    before = repetition_score(story_from_token_lists(base), config)
    after = repetition_score(story_from_token_lists(base + [base[-1]]), config)
    assert after.final > before.final  # the duplicate's intra score dilutes


@given(st.lists(st.lists(st.sampled_from(WORDS), min_size=1, max_size=6),
                min_size=1, max_size=3, unique_by=lambda s: frozenset(s))
       .filter(lambda ls: all(not (set(a) & set(b))
                              for i, a in enumerate(ls) for b in ls[:i])))
def test_duplicating_into_a_repetition_free_story_lowers_final(token_lists):
    story = story_from_token_lists(token_lists)
    assert repetition_score(story).final == 1.0
    duplicated = story_from_token_lists(token_lists + [token_lists[-1]])
    assert repetition_score(duplicated).final < 1.0


def test_mean_pooling_dilution_counterexample():
    # Documented counterexample to naive duplicate monotonicity under the
    # default mean pooling.
    before = repetition_score(story_from_token_lists([["a", "b"], ["a", "b"], ["a"]]))
    after = repetition_score(story_from_token_lists([["a", "b"], ["a", "b"], ["a"], ["a"]]))
    assert after.final > before.final
