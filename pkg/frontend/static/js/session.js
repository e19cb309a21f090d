/** Annotation session state machine.
 *
 * One annotator per session; the service is the source of truth, so a
 * reload simply resumes at the first unjudged task. Submits are guarded
 * against double-firing, and a DuplicateJudgment from the server is
 * treated as "already recorded; advance" rather than an error.
 */
import { ApiError } from "./api.js";
function isDone(view) {
    return view.done === true;
}
export class AnnotationSession {
    constructor(api, annotatorId) {
        this.api = api;
        this.annotatorId = annotatorId;
        this.state = { phase: "idle" };
        this.listeners = [];
    }
    getState() {
        return this.state;
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    setState(state) {
        this.state = state;
        for (const listener of this.listeners)
            listener(state);
    }
    async start() {
        this.setState({ phase: "loading" });
        await this.loadNext();
    }
    async loadNext() {
        try {
            const view = await this.api.nextTask(this.annotatorId);
            if (isDone(view)) {
                this.setState({ phase: "done", judged: view.judged, total: view.total });
            }
            else {
                this.setState({ phase: "task", task: view, selected: null, submitting: false });
            }
        }
        catch (err) {
            this.fail(err, () => this.loadNext());
        }
    }
    select(option) {
        if (this.state.phase !== "task" || this.state.submitting)
            return;
        this.setState({ ...this.state, selected: option });
    }
    /** Select by keyboard slot (1-4 as shown on screen). */
    selectSlot(slot) {
        if (this.state.phase !== "task")
            return;
        const option = this.state.task.options[slot - 1];
        if (option)
            this.select(option.id);
    }
    async submit() {
        if (this.state.phase !== "task")
            return;
        const { task, selected, submitting } = this.state;
        if (selected === null || submitting)
            return; // nothing chosen or in flight
        this.setState({ ...this.state, submitting: true });
        try {
            await this.api.submitJudgment(this.annotatorId, task.taskId, selected);
            await this.loadNext();
        }
        catch (err) {
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
    fail(err, retry) {
        const message = err instanceof Error ? err.message : String(err);
        this.setState({ phase: "error", message, retry });
    }
}
