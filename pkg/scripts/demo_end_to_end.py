#!/usr/bin/env python3
"""Full pipeline walkthrough on the synthetic demo corpus.

Builds a manifest plus bundles, scores them, renders reports, samples items
for human evaluation, simulates five annotators against the live service,
and tallies the collected judgments. Everything is seeded; rerunning
reproduces identical outputs (modulo timestamps in the summary).

Usage: python scripts/demo_end_to_end.py [workdir]
"""

import json
import random
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from storyeval import (RunConfig, distances_by_verdict, judgment_tally,
                       load_run_report, read_journal, render_report,
                       run_evaluation, sample_by_distance, save_manifest,
                       welch_t_test, write_bundles)
from storyeval.demo import build_demo_corpus
from storyeval.errors import DegenerateSample
from storyeval.service import JudgmentTask, create_app, save_tasks


def main() -> None:
    workdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo-workdir")
    workdir.mkdir(parents=True, exist_ok=True)
    config = RunConfig(seed=2026, model_sizes={"alpha": 360.0, "beta": 7500.0})

    manifest, bundles, meta = build_demo_corpus(n_items=30, seed=2026)
    save_manifest(manifest, workdir / "manifest.jsonl")
    write_bundles(bundles.values(), meta, workdir / "bundles.jsonl")
    print(f"corpus: {len(manifest.items)} items, systems {manifest.systems}")

    run_dir = run_evaluation(manifest, bundles, workdir / "run", config=config,
                             overwrite=True)
    summary = json.loads((run_dir / "summary.json").read_text())
    for name, stats in sorted(summary["per_system"].items()):
        print(f"  {name}: mean d_hm {stats['mean_d_hm']:.4f} "
              f"(of-means {stats['d_hm_of_means']:.4f})")

    for path in render_report(run_dir):
        print(f"report artifact: {path}")

    report = load_run_report(run_dir, "alpha")
    ids = sample_by_distance(report, 20, bins=config.sample_bins, seed=config.seed)
    by_id = {item.sequence.sequence_id: item for item in manifest.items}
    tasks = [JudgmentTask(sequence_id=sid, system="alpha",
                          image_uris=tuple(i.uri for i in by_id[sid].sequence.images),
                          human_text=by_id[sid].human_story.text,
                          model_text=by_id[sid].model_stories["alpha"].text)
             for sid in ids]
    save_tasks(tasks, workdir / "sample.json", seed=config.seed, run_dir=run_dir)
    print(f"sampled {len(tasks)} items for judgment")

    journal_path = workdir / "journal.jsonl"
    journal_path.unlink(missing_ok=True)
    app = create_app(tasks, journal_path, seed=config.seed)
    rng = random.Random(config.seed)
    options = ["first_better", "second_better", "both_fine", "both_bad"]
    with TestClient(app) as client:
        for annotator in [f"annotator-{i}" for i in range(1, 6)]:
            while True:
                task = client.get(f"/api/tasks/next?annotator={annotator}").json()
                if task.get("done"):
                    break
                client.post("/api/judgments", json={
                    "annotator_id": annotator, "task_id": task["task_id"],
                    # lean toward "first is better" so the tally is uneven
                    "option": rng.choice(options + ["first_better"])})

    journal = read_journal(journal_path)
    tally = judgment_tally(journal)
    print(f"journal: {len(journal)} judgments")
    for verdict, pct in tally.per_system["alpha"].percentages.items():
        print(f"  {verdict}: {pct:.1f}%")

    groups = distances_by_verdict(journal, report)
    a, b = groups["human_better"], groups["both_fine"]
    if len(a) >= 2 and len(b) >= 2:
        try:
            result = welch_t_test(a, b)
            print(f"d_hm human-better vs both-fine: t={result.t:.3f} "
                  f"p={result.p:.3f} dof={result.dof:.1f}")
        except DegenerateSample as exc:
            print(f"t-test degenerate: {exc}")


if __name__ == "__main__":
    main()
