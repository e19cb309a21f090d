/** Thin client for the judgment service; fetch is injectable for tests. */
import { OPTION_IDS } from "./types.js";
export class ApiError extends Error {
    constructor(message, code, status) {
        super(message);
        this.code = code;
        this.status = status;
    }
}
/** Fields a task payload may expose to the client; anything else is dropped. */
const TASK_FIELDS = new Set([
    "done",
    "judged", // completion payload only
    "task_id",
    "index",
    "total",
    "image_uris",
    "story_a",
    "story_b",
    "options",
    "instructions",
]);
/** Payload keys that would de-blind the pair if a server ever sent them. */
const FORBIDDEN_FIELDS = ["author", "human", "model", "presentation"];
export function auditBlinding(payload) {
    const leaks = [];
    for (const key of Object.keys(payload)) {
        const lower = key.toLowerCase();
        if (!TASK_FIELDS.has(lower) || FORBIDDEN_FIELDS.some((f) => lower.includes(f))) {
            leaks.push(key);
        }
    }
    return leaks;
}
function asRecord(value) {
    if (typeof value !== "object" || value === null) {
        throw new ApiError("malformed response", "BadPayload", 0);
    }
    return value;
}
export function toTaskView(payload) {
    const leaks = auditBlinding(payload);
    if (leaks.length > 0) {
        // refuse to render anything that could identify the authors
        throw new ApiError(`refusing de-blinded payload (fields: ${leaks.join(", ")})`, "BlindingLeak", 0);
    }
    if (payload.done === true) {
        return {
            done: true,
            judged: Number(payload.judged ?? 0),
            total: Number(payload.total ?? 0),
        };
    }
    const options = payload.options.map((o) => {
        if (!OPTION_IDS.includes(o.id)) {
            throw new ApiError(`unknown option ${o.id}`, "BadPayload", 0);
        }
        return { id: o.id, label: o.label };
    });
    return {
        taskId: String(payload.task_id),
        index: Number(payload.index),
        total: Number(payload.total),
        imageUris: payload.image_uris.map(String),
        storyA: String(payload.story_a),
        storyB: String(payload.story_b),
        options,
        instructions: String(payload.instructions ?? ""),
    };
}
export class ApiClient {
    constructor(baseUrl = "", fetchImpl = fetch) {
        this.baseUrl = baseUrl;
        this.fetchImpl = fetchImpl;
    }
    async request(path, init) {
        const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
        const body = await response.json().catch(() => ({}));
        if (response.status >= 400) {
            const record = asRecord(body);
            throw new ApiError(String(record.detail ?? `request failed (${response.status})`), String(record.error ?? "HttpError"), response.status);
        }
        return body;
    }
    async nextTask(annotatorId) {
        const body = await this.request(`/api/tasks/next?annotator=${encodeURIComponent(annotatorId)}`);
        return toTaskView(asRecord(body));
    }
    async submitJudgment(annotatorId, taskId, option) {
        await this.request("/api/judgments", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({
                annotator_id: annotatorId,
                task_id: taskId,
                option,
            }),
        });
    }
    async progress(annotatorId) {
        const body = asRecord(await this.request(`/api/progress?annotator=${encodeURIComponent(annotatorId)}`));
        return { judged: Number(body.judged), total: Number(body.total) };
    }
    async instructions() {
        return (await this.request("/api/instructions"));
    }
}
