#!/usr/bin/env python3
"""Desk check: per-story scores and distances for the published examples.

Recomputes the repetition score of each bundled example story under both
the default and the alternative configuration, and the distance table from
the published per-story metric triples.
"""

from storyeval import MetricScores, Story, aggregate_distance, metric_distances, repetition_score
from storyeval.repetition import DESK_CHECK_CLOSING_CONFIG

STORIES = {
    "human": ("we invited lots of friends for a barbeque. the fire pit was very large. "
              "we roasted hot dogs right over the flame. lots of people were happy. "
              "and there was a lot of beer too.", (0.993, 0.933, 0.968)),
    "arel": ("the friends were having a great time at the party. the fire was <UNK> and "
             "<UNK>. the fire was <UNK> and <UNK>. the guys were having a great time. "
             "we all had a great time and had a great time.", (0.562, 0.348, 0.670)),
    "glacnet": ("the family was having a party. they played some fire. then they had a "
                "big bonfire. everyone was happy. it was a great day.", (0.974, 0.336, 0.960)),
    "tapm": ("the group of friends got together for a bonfire. we had a lot of fun "
             "cooking. the barbecue was delicious. we took a lot of pictures. the night "
             "ended with a few drinks.", (0.992, 0.597, 0.938)),
}


def main() -> None:
    print(f"{'story':10s} {'published R':>12s} {'default':>9s} {'max+rem':>9s}")
    for name, (text, (_, _, r_published)) in STORIES.items():
        author = "human" if name == "human" else f"system:{name}"
        story = Story.from_text(name, "fig-seq", author, text)
        r_default = repetition_score(story).final
        r_closing = repetition_score(story, DESK_CHECK_CLOSING_CONFIG).final
        print(f"{name:10s} {r_published:12.3f} {r_default:9.4f} {r_closing:9.4f}")

    print("\ndistances from published per-story metric triples:")
    human = MetricScores(*STORIES["human"][1], "fig")
    for name, (_, triple) in STORIES.items():
        if name == "human":
            continue
        d = metric_distances(human, MetricScores(*triple, "fig"))
        print(f"{name:10s} d_c={d[0]:.3f} d_g={d[1]:.3f} d_r={d[2]:.3f} "
              f"d_hm={aggregate_distance(*d):.4f}")


if __name__ == "__main__":
    main()
