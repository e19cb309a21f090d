/** Annotation session state machine.
 *
 * One annotator per session; the service is the source of truth, so a
 * reload simply resumes at the first unjudged task. Submits are guarded
 * against double-firing, and a DuplicateJudgment from the server is
 * treated as "already recorded; advance" rather than an error.
 */

import { ApiClient, ApiError } from "./api.js";
import type { DoneView, OptionId, TaskView } from "./types.js";

export type SessionState =
  | { phase: "idle" }
  | { phase: "loading" }
  | { phase: "task"; task: TaskView; selected: OptionId | null; submitting: boolean }
  | { phase: "done"; judged: number; total: number }
  | { phase: "error"; message: string; retry: () => Promise<void> };

export type Listener = (state: SessionState) => void;

function isDone(view: TaskView | DoneView): view is DoneView {
  return (view as DoneView).done === true;
}

export class AnnotationSession {
  private state: SessionState = { phase: "idle" };
  private listeners: Listener[] = [];

  constructor(
    private readonly api: ApiClient,
    readonly annotatorId: string,
  ) {}

  getState(): SessionState {
    return this.state;
  }

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  private setState(state: SessionState): void {
    this.state = state;
    for (const listener of this.listeners) listener(state);
  }

  async start(): Promise<void> {
    this.setState({ phase: "loading" });
    await this.loadNext();
  }

  private async loadNext(): Promise<void> {
    try {
      const view = await this.api.nextTask(this.annotatorId);
      if (isDone(view)) {
        this.setState({ phase: "done", judged: view.judged, total: view.total });
      } else {
        this.setState({ phase: "task", task: view, selected: null, submitting: false });
      }
    } catch (err) {
      this.fail(err, () => this.loadNext());
    }
  }

  select(option: OptionId): void {
    if (this.state.phase !== "task" || this.state.submitting) return;
    this.setState({ ...this.state, selected: option });
  }

  /** Select by keyboard slot (1-4 as shown on screen). */
  selectSlot(slot: number): void {
    if (this.state.phase !== "task") return;
    const option = this.state.task.options[slot - 1];
    if (option) this.select(option.id);
  }

  async submit(): Promise<void> {
    if (this.state.phase !== "task") return;
    const { task, selected, submitting } = this.state;
    if (selected === null || submitting) return; // nothing chosen or in flight
    this.setState({ ...this.state, submitting: true });
    try {
      await this.api.submitJudgment(this.annotatorId, task.taskId, selected);
      await this.loadNext();
    } catch (err) {
      if (err instanceof ApiError && err.code === "DuplicateJudgment") {
        // already recorded (e.g. an earlier submit landed); just advance
        await this.loadNext();
        return;
      }
      this.fail(err, async () => {
        // selection survives a retry; no data loss on network failure
        this.setState({ phase: "task", task, selected, submitting: false });
      });
    }
  }

  private fail(err: unknown, retry: () => Promise<void>): void {
    const message = err instanceof Error ? err.message : String(err);
    this.setState({ phase: "error", message, retry });
  }
}
