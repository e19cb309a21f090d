"""Shared fixtures: desk-check stories, score triples, synthetic corpus."""

import os
from datetime import timedelta

import pytest
from hypothesis import HealthCheck, settings

from storyeval.demo import build_demo_corpus

settings.register_profile(
    "default",
    deadline=timedelta(milliseconds=2000),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


# Per-story texts and (coherence, grounding, repetition) triples for one
# barbecue image sequence, used as desk-check fixtures throughout.
DESK_STORIES = {
    "human": (
        "we invited lots of friends for a barbeque. the fire pit was very "
        "large. we roasted hot dogs right over the flame. lots of people "
        "were happy. and there was a lot of beer too.",
        (0.993, 0.933, 0.968),
    ),
    "arel": (
        "the friends were having a great time at the party. the fire was "
        "<UNK> and <UNK>. the fire was <UNK> and <UNK>. the guys were "
        "having a great time. we all had a great time and had a great time.",
        (0.562, 0.348, 0.670),
    ),
    "glacnet": (
        "the family was having a party. they played some fire. then they "
        "had a big bonfire. everyone was happy. it was a great day.",
        (0.974, 0.336, 0.960),
    ),
    "tapm": (
        "the group of friends got together for a bonfire. we had a lot of "
        "fun cooking. the barbecue was delicious. we took a lot of "
        "pictures. the night ended with a few drinks.",
        (0.992, 0.597, 0.938),
    ),
    "llava": (
        "in the dark, a group of friends huddled around a fire, their faces "
        "lit up with the warmth of the flames. the fire crackled and "
        "roared, casting dancing shadows on their faces. one friend, a bit "
        "too eager, accidentally dropped a hot dog into the fire, causing a "
        "burst of flames and laughter. the friends cheered and clapped, "
        "their joy infectious. as the night wore on, they shared stories "
        "and laughter, the fire slowly dying down, leaving behind only the "
        "memories of their fun-filled evening.",
        (0.999, 0.574, 0.841),
    ),
    "blip2": (
        "a group of people standing outside drinking beer and talking on "
        "cell phones .  . a hot dog is being cooked on a stick over a fire "
        ".  . a group of people standing in a room with a woman making a "
        "surprised face.",
        (0.294, 1.024, 0.884),
    ),
}


@pytest.fixture(scope="session")
def desk_stories():
    return DESK_STORIES


@pytest.fixture(scope="session")
def demo_corpus():
    return build_demo_corpus(n_items=8, seed=7)


@pytest.fixture()
def small_corpus():
    return build_demo_corpus(n_items=3, systems=("alpha",), seed=11)
