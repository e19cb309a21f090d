"""Command-line surface: score, distance, report, sample, serve, stats, validate."""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from .corpus import load_manifest, read_bundles, read_journal, save_threshold
from .errors import StoryEvalError
from .report import render_report
from .runner import (RunConfig, SCORE_COLUMNS, load_run_report, run_evaluation,
                     score_manifest)
from .service import JudgmentTask, create_app, load_tasks, save_tasks
from .stats import distances_by_verdict, judgment_tally, sample_by_distance, welch_t_test
from .stories import validate_bundle


def _load_config(config_path: Path | None, seed: int | None) -> RunConfig:
    config = RunConfig()
    if config_path is not None:
        config = RunConfig.from_dict(json.loads(config_path.read_text(encoding="utf-8")))
    if seed is not None:
        config = RunConfig.from_dict({**config.to_dict(), "seed": seed})
    return config


def _resolve(data_dir: Path, path: str) -> Path:
    p = Path(path)
    return p if p.is_absolute() else data_dir / p


@click.group()
@click.option("--data-dir", envvar="STORYEVAL_DATA_DIR", default=".",
              type=click.Path(path_type=Path), help="Base directory for relative paths.")
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path),
              default=None, help="JSON run-config file.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.pass_context
def main(ctx, data_dir: Path, config_path: Path | None, seed: int | None):
    """Reference-free visual storytelling evaluation toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = data_dir
    ctx.obj["config"] = _load_config(config_path, seed)


@main.command()
@click.argument("manifest_path")
@click.argument("bundles_path")
@click.pass_context
def validate(ctx, manifest_path, bundles_path):
    """Validate a manifest and its feature bundles."""
    data_dir = ctx.obj["data_dir"]
    manifest = load_manifest(_resolve(data_dir, manifest_path))
    _, bundles = read_bundles(_resolve(data_dir, bundles_path))
    problems = 0
    for item in manifest.items:
        for story in [item.human_story, *item.model_stories.values()]:
            bundle = bundles.get(story.story_id)
            if bundle is None:
                click.echo(f"MISSING  {story.story_id}")
                problems += 1
                continue
            report = validate_bundle(story, bundle)
            for violation in report.violations:
                click.echo(f"INVALID  {story.story_id}: {violation}")
                problems += 1
    click.echo(f"{len(manifest.items)} items, {problems} problem(s)")
    if problems:
        sys.exit(1)


@main.command()
@click.argument("manifest_path")
@click.argument("bundles_path")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--systems", default=None, help="Comma-separated system names.")
@click.pass_context
def score(ctx, manifest_path, bundles_path, out_dir: Path, systems):
    """Compute per-story metric scores (no distances)."""
    data_dir, config = ctx.obj["data_dir"], ctx.obj["config"]
    manifest = load_manifest(_resolve(data_dir, manifest_path))
    _, bundles = read_bundles(_resolve(data_dir, bundles_path))
    names = systems.split(",") if systems else None
    usable, excluded, threshold, scores = score_manifest(manifest, bundles, names, config)

    out_dir.mkdir(parents=True, exist_ok=True)
    save_threshold(threshold, out_dir / "threshold.json")
    with open(out_dir / "scores.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SCORE_COLUMNS)
        rows = []
        for item in usable:
            seq_id = item.sequence.sequence_id
            for (s, author), ms in scores.items():
                if s != seq_id:
                    continue
                story = (item.human_story if author == "human"
                         else item.model_stories[author.split(":", 1)[1]])
                rows.append([story.story_id, seq_id, author, repr(ms.coherence),
                             repr(ms.grounding), repr(ms.repetition),
                             ms.threshold_id, "|".join(ms.flags)])
        for row in sorted(rows, key=lambda r: (r[1], r[2])):
            writer.writerow(row)
    click.echo(f"scored {len(usable)} items ({len(excluded)} excluded) -> {out_dir}")


@main.command()
@click.argument("manifest_path")
@click.argument("bundles_path")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--systems", default=None, help="Comma-separated system names "
              "(use 'human' for a self-comparison control).")
@click.option("--overwrite", is_flag=True)
@click.pass_context
def distance(ctx, manifest_path, bundles_path, out_dir: Path, systems, overwrite):
    """Run the full evaluation: scores, distances, corpus reports."""
    data_dir, config = ctx.obj["data_dir"], ctx.obj["config"]
    manifest = load_manifest(_resolve(data_dir, manifest_path))
    _, bundles = read_bundles(_resolve(data_dir, bundles_path))
    names = systems.split(",") if systems else None
    run_dir = run_evaluation(manifest, bundles, out_dir, names, config,
                             overwrite=overwrite)
    summary = json.loads((run_dir / "summary.json").read_text(encoding="utf-8"))
    for name, stats in sorted(summary["per_system"].items()):
        click.echo(f"{name}: mean distance {stats['mean_d_hm']:.4f} over {stats['n']} stories")
    click.echo(f"run written to {run_dir}")


@main.command()
@click.argument("run_dir", type=click.Path(exists=True, path_type=Path))
def report(run_dir: Path):
    """Render bar-chart CSV/SVG (and scatter data) for a run."""
    for path in render_report(run_dir):
        click.echo(str(path))


@main.command()
@click.argument("run_dir", type=click.Path(exists=True, path_type=Path))
@click.argument("manifest_path")
@click.option("--system", required=True)
@click.option("-n", "size", type=int, required=True)
@click.option("--bins", type=int, default=10, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.pass_context
def sample(ctx, run_dir: Path, manifest_path, system, size, bins, out_path: Path):
    """Sample sequences for human evaluation, stratified by distance."""
    data_dir, config = ctx.obj["data_dir"], ctx.obj["config"]
    corpus_report = load_run_report(run_dir, system)
    ids = sample_by_distance(corpus_report, size, bins=bins, seed=config.seed)
    manifest = load_manifest(_resolve(data_dir, manifest_path))
    by_id = {item.sequence.sequence_id: item for item in manifest.items}
    tasks = []
    for seq_id in ids:
        item = by_id[seq_id]
        tasks.append(JudgmentTask(
            sequence_id=seq_id, system=system,
            image_uris=tuple(img.uri for img in item.sequence.images),
            human_text=item.human_story.text,
            model_text=item.model_stories[system].text))
    save_tasks(tasks, out_path, seed=config.seed, run_dir=run_dir)
    click.echo(f"sampled {len(tasks)} items -> {out_path}")


@main.command()
@click.argument("sample_path", type=click.Path(exists=True, path_type=Path))
@click.option("--journal", "journal_path", required=True,
              type=click.Path(path_type=Path))
@click.option("--port", type=int, default=8701, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui", "ui_dir", default=None,
              type=click.Path(path_type=Path, resolve_path=True),
              help="Static directory with the annotation UI build.")
@click.option("--annotators", default=None,
              help="Comma-separated roster; default accepts any id.")
@click.pass_context
def serve(ctx, sample_path: Path, journal_path: Path, port, host, ui_dir, annotators):
    """Serve the judgment-collection API (and optionally the UI)."""
    import uvicorn

    config = ctx.obj["config"]
    tasks = load_tasks(sample_path)
    app = create_app(tasks, journal_path, seed=config.seed,
                     annotators=annotators.split(",") if annotators else None,
                     static_dir=ui_dir)
    click.echo(f"serving {len(tasks)} tasks on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.argument("journal_path", type=click.Path(exists=True, path_type=Path))
@click.option("--run", "run_dir", type=click.Path(exists=True, path_type=Path),
              default=None, help="Run directory for distance-vs-verdict tests.")
@click.option("--system", default=None)
def stats(journal_path: Path, run_dir: Path | None, system):
    """Tally judgments; optionally test distance against verdict classes."""
    judgments = read_journal(journal_path)
    tally = judgment_tally(judgments)
    out = {"total": tally.total, "per_system": {}}
    for name, st in tally.per_system.items():
        out["per_system"][name] = {"n": st.n, "counts": st.counts,
                                   "percentages": {k: round(v, 2)
                                                   for k, v in st.percentages.items()}}
    if run_dir is not None:
        names = [system] if system else sorted(tally.per_system)
        for name in names:
            corpus_report = load_run_report(run_dir, name)
            groups = distances_by_verdict(judgments, corpus_report)
            entry = out["per_system"].setdefault(name, {})
            entry["mean_d_hm_by_verdict"] = {
                verdict: (sum(vals) / len(vals) if vals else None)
                for verdict, vals in groups.items()}
            a, b = groups["human_better"], groups["both_fine"]
            if len(a) >= 2 and len(b) >= 2:
                try:
                    result = welch_t_test(a, b)
                    entry["human_better_vs_both_fine"] = {
                        "t": result.t, "p": result.p, "dof": result.dof}
                except StoryEvalError as exc:
                    entry["human_better_vs_both_fine"] = {"error": str(exc)}
    click.echo(json.dumps(out, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
