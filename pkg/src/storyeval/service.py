"""HTTP service collecting blinded pairwise judgments for sampled stories.

One annotator works through the sampled items in order; each item shows the
image sequence plus the human-written and model-generated story in a
randomized (but per-item fixed, seeded, and journaled) presentation order.
The client never learns which story is which: task payloads carry only
story_a / story_b. Judgments are appended to a single JSON-lines journal,
serialized through one writer lock, and are write-once per annotator x item.
"""

from __future__ import annotations

import json
import random
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .corpus import (JUDGMENT_OPTIONS, Judgment, _utc_now, append_judgment,
                     read_journal)

DEFAULT_INSTRUCTIONS = (
    "You will see a sequence of images and two stories written for it, "
    "labelled Story A and Story B. Read both stories, look at the images, "
    "and judge which story is better for this image sequence. If neither is "
    "better, say whether both are fine or both are bad. There is no right "
    "answer; use your own sense of what makes a good story. Keyboard "
    "shortcuts 1-4 select the four options."
)

OPTION_LABELS = {
    "first_better": "Story A is better",
    "second_better": "Story B is better",
    "both_fine": "Both are similarly fine",
    "both_bad": "Both are similarly bad",
}

OPTION_EXAMPLES = {
    "first_better": "Story A recounts the pictured events in a natural arc "
                    "while Story B wanders; pick this option.",
    "second_better": "Story B follows the images and reads well while Story "
                     "A repeats itself; pick this option.",
    "both_fine": "Both stories fit the images and read naturally; neither "
                 "stands out.",
    "both_bad": "Both stories ignore the images or barely form a narrative.",
}


@dataclass(frozen=True)
class JudgmentTask:
    """One sampled <sequence, human story, model story> item to be judged."""

    sequence_id: str
    system: str
    image_uris: tuple[str, ...]
    human_text: str
    model_text: str

    @property
    def task_id(self) -> str:
        return f"{self.sequence_id}::{self.system}"


def presentation_order_for(task_id: str, seed: int) -> str:
    """Seeded per-item coin flip, stable across restarts."""
    return random.Random(f"{seed}:{task_id}").choice(["human_first", "model_first"])


class JudgmentPost(BaseModel):
    annotator_id: str
    task_id: str
    option: str


def create_app(tasks: Sequence[JudgmentTask], journal_path: str | Path,
               seed: int = 0, instructions: str = DEFAULT_INSTRUCTIONS,
               annotators: Sequence[str] | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    """Build the judgment service around a task list and a journal file.

    `annotators` optionally restricts who may submit; by default any opaque
    non-empty id is accepted. `static_dir` optionally serves the annotation
    UI from the same origin as the API.
    """
    journal_path = Path(journal_path)
    by_id = {t.task_id: t for t in tasks}
    if len(by_id) != len(tasks):
        raise ValueError("duplicate task ids in sample")
    roster = set(annotators) if annotators is not None else None

    lock = threading.Lock()
    # (annotator_id, task_id) pairs already judged; seeded from the journal
    # so restarts resume rather than double-collect.
    done: set[tuple[str, str]] = set()
    for j in read_journal(journal_path):
        done.add((j.annotator_id, f"{j.sequence_id}::{j.system}"))

    app = FastAPI(title="storyeval judgments")

    def _error(status: int, code: str, detail: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": code, "detail": detail})

    def _check_annotator(annotator_id: str) -> JSONResponse | None:
        if not annotator_id or not annotator_id.strip():
            return _error(400, "UnknownAnnotator", "annotator id is empty")
        if roster is not None and annotator_id not in roster:
            return _error(403, "UnknownAnnotator",
                          f"annotator {annotator_id!r} is not in the roster")
        return None

    @app.get("/api/tasks/next")
    def next_task(annotator: str = Query(...)):
        err = _check_annotator(annotator)
        if err:
            return err
        with lock:
            pending = [t for t in tasks if (annotator, t.task_id) not in done]
            judged = len(tasks) - len(pending)
        if not pending:
            # ExhaustedTasks: signals completion, not a failure.
            return {"done": True, "judged": judged, "total": len(tasks)}
        task = pending[0]
        order = presentation_order_for(task.task_id, seed)
        first, second = ((task.human_text, task.model_text)
                         if order == "human_first"
                         else (task.model_text, task.human_text))
        return {
            "done": False,
            "task_id": task.task_id,
            "index": judged + 1,
            "total": len(tasks),
            "image_uris": list(task.image_uris),
            "story_a": first,
            "story_b": second,
            "options": [{"id": opt, "label": OPTION_LABELS[opt]}
                        for opt in JUDGMENT_OPTIONS],
            "instructions": instructions,
        }

    @app.post("/api/judgments")
    def post_judgment(body: JudgmentPost):
        err = _check_annotator(body.annotator_id)
        if err:
            return err
        task = by_id.get(body.task_id)
        if task is None:
            return _error(404, "UnknownTask", f"no task {body.task_id!r} in this sample")
        if body.option not in JUDGMENT_OPTIONS:
            return _error(400, "UnknownOption",
                          f"option must be one of {list(JUDGMENT_OPTIONS)}")
        judgment = Judgment(
            annotator_id=body.annotator_id,
            sequence_id=task.sequence_id,
            system=task.system,
            option=body.option,
            presentation_order=presentation_order_for(task.task_id, seed),
            timestamp=_utc_now(),
        )
        with lock:
            key = (body.annotator_id, body.task_id)
            if key in done:
                return _error(409, "DuplicateJudgment",
                              f"{body.annotator_id!r} already judged {body.task_id!r}")
            append_judgment(judgment, journal_path)
            done.add(key)
        return {"status": "recorded", "task_id": body.task_id}

    @app.get("/api/progress")
    def progress(annotator: str | None = Query(default=None)):
        with lock:
            snapshot = set(done)
        if annotator is not None:
            judged = sum(1 for a, _ in snapshot if a == annotator)
            return {"annotator": annotator, "judged": judged, "total": len(tasks)}
        per = {}
        for a, _ in snapshot:
            per[a] = per.get(a, 0) + 1
        return {"total_tasks": len(tasks), "judgments": len(snapshot),
                "per_annotator": dict(sorted(per.items()))}

    @app.get("/api/instructions")
    def get_instructions():
        return {"instructions": instructions,
                "options": [{"id": opt, "label": OPTION_LABELS[opt],
                             "example": OPTION_EXAMPLES[opt]}
                            for opt in JUDGMENT_OPTIONS]}

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def load_tasks(sample_path: str | Path) -> list[JudgmentTask]:
    """Read a sample file written by the `sample` CLI command."""
    payload = json.loads(Path(sample_path).read_text(encoding="utf-8"))
    return [JudgmentTask(sequence_id=t["sequence_id"], system=t["system"],
                         image_uris=tuple(t["image_uris"]),
                         human_text=t["human_text"], model_text=t["model_text"])
            for t in payload["tasks"]]


def save_tasks(tasks: Sequence[JudgmentTask], sample_path: str | Path,
               seed: int, run_dir: str | Path | None = None) -> None:
    payload = {
        "seed": seed,
        "run_dir": str(run_dir) if run_dir else None,
        "tasks": [{"sequence_id": t.sequence_id, "system": t.system,
                   "image_uris": list(t.image_uris), "human_text": t.human_text,
                   "model_text": t.model_text} for t in tasks],
    }
    Path(sample_path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                                 encoding="utf-8")
