"""Judgment service: task flow, write-once journal, blinding, progress."""

import json

import pytest
from fastapi.testclient import TestClient

from storyeval import judgment_tally, read_journal
from storyeval.service import (JudgmentTask, create_app, load_tasks,
                               presentation_order_for, save_tasks)


def make_tasks(n=4, system="alpha"):
    return [JudgmentTask(sequence_id=f"q{i:03d}", system=system,
                         image_uris=tuple(f"img/q{i:03d}-{k}.jpg" for k in range(5)),
                         human_text=f"human story {i}.",
                         model_text=f"model story {i}.")
            for i in range(n)]


@pytest.fixture()
def client(tmp_path):
    tasks = make_tasks()
    app = create_app(tasks, tmp_path / "journal.jsonl", seed=9)
    with TestClient(app) as c:
        c.journal_path = tmp_path / "journal.jsonl"
        c.tasks = tasks
        yield c


def judge_all(client, annotator, option="both_fine"):
    seen = []
    while True:
        task = client.get(f"/api/tasks/next?annotator={annotator}").json()
        if task.get("done"):
            return seen, task
        resp = client.post("/api/judgments", json={
            "annotator_id": annotator, "task_id": task["task_id"], "option": option})
        assert resp.status_code == 200, resp.text
        seen.append(task["task_id"])


class TestTaskFlow:
    def test_sequential_tasks_then_done(self, client):
        seen, done = judge_all(client, "a1")
        assert seen == [t.task_id for t in client.tasks]
        assert done == {"done": True, "judged": 4, "total": 4}

    def test_progress_counts(self, client):
        judge_all(client, "a1")
        task = client.get("/api/tasks/next?annotator=a2").json()
        client.post("/api/judgments", json={"annotator_id": "a2",
                                            "task_id": task["task_id"],
                                            "option": "both_bad"})
        assert client.get("/api/progress?annotator=a1").json()["judged"] == 4
        assert client.get("/api/progress?annotator=a2").json()["judged"] == 1
        overall = client.get("/api/progress").json()
        assert overall["judgments"] == 5
        assert overall["per_annotator"] == {"a1": 4, "a2": 1}

    def test_duplicate_judgment_rejected(self, client):
        task = client.get("/api/tasks/next?annotator=a1").json()
        body = {"annotator_id": "a1", "task_id": task["task_id"], "option": "both_fine"}
        assert client.post("/api/judgments", json=body).status_code == 200
        dup = client.post("/api/judgments", json=body)
        assert dup.status_code == 409
        assert dup.json()["error"] == "DuplicateJudgment"
        assert len(read_journal(client.journal_path)) == 1

    def test_unknown_option_rejected(self, client):
        task = client.get("/api/tasks/next?annotator=a1").json()
        resp = client.post("/api/judgments", json={
            "annotator_id": "a1", "task_id": task["task_id"], "option": "shrug"})
        assert resp.status_code == 400
        assert resp.json()["error"] == "UnknownOption"

    def test_unknown_task_rejected(self, client):
        resp = client.post("/api/judgments", json={
            "annotator_id": "a1", "task_id": "zzz::none", "option": "both_fine"})
        assert resp.status_code == 404

    def test_empty_annotator_rejected(self, client):
        resp = client.get("/api/tasks/next?annotator=%20")
        assert resp.status_code == 400
        assert resp.json()["error"] == "UnknownAnnotator"

    def test_roster_enforced(self, tmp_path):
        app = create_app(make_tasks(), tmp_path / "j.jsonl", annotators=["alice"])
        with TestClient(app) as client:
            assert client.get("/api/tasks/next?annotator=alice").status_code == 200
            resp = client.get("/api/tasks/next?annotator=eve")
            assert resp.status_code == 403

    def test_instructions_with_four_examples(self, client):
        payload = client.get("/api/instructions").json()
        assert len(payload["options"]) == 4
        assert all(opt["example"] for opt in payload["options"])
        assert payload["instructions"]


class TestBlindingAndJournal:
    def test_payload_carries_no_authorship(self, client):
        task = client.get("/api/tasks/next?annotator=a1").json()
        flattened = json.dumps(task).lower()
        for needle in ("author", "human_text", "model_text", "presentation",
                       "human_first", "model_first"):
            assert needle not in flattened, needle
        assert set(task) == {"done", "task_id", "index", "total", "image_uris",
                             "story_a", "story_b", "options", "instructions"}

    def test_presentation_order_is_seeded_and_recorded(self, client):
        judge_all(client, "a1", option="first_better")
        journal = read_journal(client.journal_path)
        for j in journal:
            expected = presentation_order_for(f"{j.sequence_id}::{j.system}", seed=9)
            assert j.presentation_order == expected
        # with non-degenerate probability both orders occur across 4 items
        # (seeded, so this is a fixed fact for seed=9, not flakiness)
        orders = {j.presentation_order for j in journal}
        assert orders == {"human_first", "model_first"}

    def test_story_a_matches_recorded_order(self, client):
        task = client.get("/api/tasks/next?annotator=a1").json()
        seq = task["task_id"].split("::")[0]
        order = presentation_order_for(task["task_id"], seed=9)
        human = f"human story {int(seq[1:])}."
        assert (task["story_a"] == human) == (order == "human_first")

    def test_restart_resumes_from_journal(self, tmp_path):
        tasks = make_tasks()
        journal = tmp_path / "journal.jsonl"
        with TestClient(create_app(tasks, journal, seed=9)) as client:
            task = client.get("/api/tasks/next?annotator=a1").json()
            client.post("/api/judgments", json={"annotator_id": "a1",
                                                "task_id": task["task_id"],
                                                "option": "both_fine"})
        with TestClient(create_app(tasks, journal, seed=9)) as client:
            resumed = client.get("/api/tasks/next?annotator=a1").json()
            assert resumed["task_id"] == tasks[1].task_id
            dup = client.post("/api/judgments", json={"annotator_id": "a1",
                                                      "task_id": tasks[0].task_id,
                                                      "option": "both_fine"})
            assert dup.status_code == 409

    def test_replaying_journal_reproduces_tally(self, client):
        judge_all(client, "a1", option="first_better")
        judge_all(client, "a2", option="second_better")
        journal = read_journal(client.journal_path)
        tally_once = judgment_tally(journal)
        tally_again = judgment_tally(read_journal(client.journal_path))
        assert tally_once == tally_again
        total = sum(tally_once.per_system["alpha"].counts.values())
        assert total == 8


def test_sample_file_round_trip(tmp_path):
    tasks = make_tasks(3)
    path = tmp_path / "sample.json"
    save_tasks(tasks, path, seed=4, run_dir="/tmp/run")
    assert load_tasks(path) == tasks


FRONTEND_STATIC = __import__("pathlib").Path(__file__).resolve().parents[1] / "frontend" / "static"


@pytest.mark.skipif(not (FRONTEND_STATIC / "js" / "main.js").exists(),
                    reason="frontend not built (run `npm run build` in frontend/)")
def test_static_ui_served_from_same_origin(tmp_path):
    app = create_app(make_tasks(2), tmp_path / "journal.jsonl", seed=1,
                     static_dir=FRONTEND_STATIC)
    with TestClient(app) as client:
        page = client.get("/")
        assert page.status_code == 200
        assert "<div id=\"app\">" in page.text
        script = client.get("/js/main.js")
        assert script.status_code == 200
        assert "AnnotationSession" in script.text
        # API still wins over the static mount
        assert client.get("/api/progress").json()["total_tasks"] == 2
