/** A scripted fake service matching the judgment API. */

import type { FetchLike } from "../src/types.js";

export interface FakeTask {
  task_id: string;
  image_uris: string[];
  story_a: string;
  story_b: string;
}

export function makeTasks(n: number): FakeTask[] {
  return Array.from({ length: n }, (_, i) => ({
    task_id: `q${i}::alpha`,
    image_uris: [`img/q${i}-0.jpg`, `img/q${i}-1.jpg`],
    story_a: `story a of item ${i}.`,
    story_b: `story b of item ${i}.`,
  }));
}

const OPTIONS = [
  { id: "first_better", label: "Story A is better" },
  { id: "second_better", label: "Story B is better" },
  { id: "both_fine", label: "Both are similarly fine" },
  { id: "both_bad", label: "Both are similarly bad" },
];

export class FakeService {
  judged = new Map<string, Set<string>>();
  failNextSubmit = false;
  requests: string[] = [];

  constructor(
    private readonly tasks: FakeTask[],
    private readonly extraTaskFields: Record<string, unknown> = {},
  ) {}

  private judgedFor(annotator: string): Set<string> {
    let set = this.judged.get(annotator);
    if (!set) {
      set = new Set();
      this.judged.set(annotator, set);
    }
    return set;
  }

  fetch: FetchLike = async (input, init) => {
    this.requests.push(`${init?.method ?? "GET"} ${input}`);
    const url = new URL(input, "http://fake");
    const respond = (status: number, body: unknown) => ({
      status,
      json: async () => body,
    });

    if (url.pathname === "/api/tasks/next") {
      const annotator = url.searchParams.get("annotator") ?? "";
      if (!annotator.trim()) {
        return respond(400, { error: "UnknownAnnotator", detail: "empty id" });
      }
      const done = this.judgedFor(annotator);
      const pending = this.tasks.filter((t) => !done.has(t.task_id));
      if (pending.length === 0) {
        return respond(200, { done: true, judged: done.size, total: this.tasks.length });
      }
      const task = pending[0];
      return respond(200, {
        done: false,
        index: done.size + 1,
        total: this.tasks.length,
        options: OPTIONS,
        instructions: "judge which story fits the images better.",
        ...task,
        ...this.extraTaskFields,
      });
    }

    if (url.pathname === "/api/judgments") {
      if (this.failNextSubmit) {
        this.failNextSubmit = false;
        throw new Error("network down");
      }
      const body = JSON.parse(init?.body ?? "{}") as {
        annotator_id: string;
        task_id: string;
        option: string;
      };
      const done = this.judgedFor(body.annotator_id);
      if (done.has(body.task_id)) {
        return respond(409, { error: "DuplicateJudgment", detail: "already recorded" });
      }
      if (!OPTIONS.some((o) => o.id === body.option)) {
        return respond(400, { error: "UnknownOption", detail: body.option });
      }
      done.add(body.task_id);
      return respond(200, { status: "recorded", task_id: body.task_id });
    }

    if (url.pathname === "/api/progress") {
      const annotator = url.searchParams.get("annotator") ?? "";
      return respond(200, {
        annotator,
        judged: this.judgedFor(annotator).size,
        total: this.tasks.length,
      });
    }

    return respond(404, { error: "NotFound", detail: url.pathname });
  };
}
