"""CLI verbs drive the same pipeline end to end."""

import json

import pytest
from click.testing import CliRunner

from storyeval import read_journal, save_manifest, write_bundles
from storyeval.cli import main
from storyeval.demo import build_demo_corpus


@pytest.fixture()
def data_dir(tmp_path):
    manifest, bundles, meta = build_demo_corpus(n_items=5, systems=("alpha",), seed=2)
    save_manifest(manifest, tmp_path / "manifest.jsonl")
    write_bundles(bundles.values(), meta, tmp_path / "bundles.jsonl")
    return tmp_path


def run_cli(args, **kwargs):
    result = CliRunner().invoke(main, args, catch_exceptions=False, **kwargs)
    assert result.exit_code == 0, result.output
    return result


def test_validate_ok(data_dir):
    result = run_cli(["--data-dir", str(data_dir), "validate",
                      "manifest.jsonl", "bundles.jsonl"])
    assert "0 problem(s)" in result.output


def test_validate_reports_missing(data_dir, tmp_path):
    lines = (data_dir / "bundles.jsonl").read_text().splitlines()
    (data_dir / "short.jsonl").write_text("\n".join(lines[:-1]) + "\n")
    result = CliRunner().invoke(main, ["--data-dir", str(data_dir), "validate",
                                       "manifest.jsonl", "short.jsonl"])
    assert result.exit_code == 1
    assert "MISSING" in result.output


def test_score_writes_scores(data_dir, tmp_path):
    out = tmp_path / "scored"
    run_cli(["--data-dir", str(data_dir), "score", "manifest.jsonl",
             "bundles.jsonl", "--out", str(out)])
    assert (out / "scores.csv").exists()
    assert (out / "threshold.json").exists()


def test_distance_report_sample_stats_flow(data_dir, tmp_path):
    run_dir = tmp_path / "run"
    result = run_cli(["--data-dir", str(data_dir), "--seed", "3", "distance",
                      "manifest.jsonl", "bundles.jsonl", "--out", str(run_dir)])
    assert "alpha: mean distance" in result.output

    result = run_cli(["report", str(run_dir)])
    assert "bars.svg" in result.output

    sample_path = tmp_path / "sample.json"
    run_cli(["--data-dir", str(data_dir), "--seed", "3", "sample", str(run_dir),
             "manifest.jsonl", "--system", "alpha", "-n", "4",
             "--out", str(sample_path)])
    payload = json.loads(sample_path.read_text())
    assert len(payload["tasks"]) == 4

    # exercise the service app wired exactly as `serve` builds it, then tally
    from fastapi.testclient import TestClient
    from storyeval.service import create_app, load_tasks
    journal = tmp_path / "journal.jsonl"
    app = create_app(load_tasks(sample_path), journal, seed=3)
    with TestClient(app) as client:
        while True:
            task = client.get("/api/tasks/next?annotator=a1").json()
            if task.get("done"):
                break
            client.post("/api/judgments", json={"annotator_id": "a1",
                                                "task_id": task["task_id"],
                                                "option": "first_better"})
    assert len(read_journal(journal)) == 4

    result = run_cli(["stats", str(journal), "--run", str(run_dir),
                      "--system", "alpha"])
    payload = json.loads(result.output)
    assert payload["total"] == 4
    assert "alpha" in payload["per_system"]


def test_human_control_via_cli(data_dir, tmp_path):
    run_dir = tmp_path / "control"
    result = run_cli(["--data-dir", str(data_dir), "distance", "manifest.jsonl",
                      "bundles.jsonl", "--systems", "human", "--out", str(run_dir)])
    assert "human: mean distance 0.0000" in result.output


def test_config_file_round_trip(data_dir, tmp_path):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({
        "seed": 11,
        "repetition": {"inter_aggregate": "max", "keep_remainder": True},
        "model_sizes": {"alpha": 360.0},
    }))
    run_dir = tmp_path / "run"
    run_cli(["--data-dir", str(data_dir), "--config", str(config_path),
             "distance", "manifest.jsonl", "bundles.jsonl", "--out", str(run_dir)])
    summary = json.loads((run_dir / "summary.json").read_text())
    assert summary["seed"] == 11
    assert summary["config"]["repetition"]["inter_aggregate"] == "max"
    run_cli(["report", str(run_dir)])
    assert (run_dir / "report" / "scatter.csv").exists()
