/** Pure HTML-string views; the thin DOM layer in main.ts injects them.
 *
 * Stories render as escaped plain text on purpose: formatting differences
 * must never hint at which story is the model's.
 */

import type { SessionState } from "./session.js";
import type { TaskView } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function renderImages(uris: string[]): string {
  const items = uris
    .map((uri) => `<img class="seq-image" src="${escapeHtml(uri)}" alt="" loading="lazy">`)
    .join("");
  return `<div class="image-strip">${items}</div>`;
}

export function renderStories(task: TaskView): string {
  return `
  <div class="stories">
    <section class="story" id="story-a">
      <h3>Story A</h3>
      <p>${escapeHtml(task.storyA)}</p>
    </section>
    <section class="story" id="story-b">
      <h3>Story B</h3>
      <p>${escapeHtml(task.storyB)}</p>
    </section>
  </div>`;
}

export function renderOptions(task: TaskView, selected: string | null): string {
  const rows = task.options
    .map((option, i) => {
      const checked = option.id === selected ? " checked" : "";
      return `
    <label class="option">
      <input type="radio" name="judgment" value="${option.id}"${checked}>
      <kbd>${i + 1}</kbd> ${escapeHtml(option.label)}
    </label>`;
    })
    .join("");
  return `<fieldset class="options">${rows}</fieldset>`;
}

export function renderTask(task: TaskView, selected: string | null,
                           submitting: boolean): string {
  const disabled = selected === null || submitting ? " disabled" : "";
  return `
  <header class="progress">Item ${task.index} of ${task.total}</header>
  ${renderImages(task.imageUris)}
  ${renderStories(task)}
  ${renderOptions(task, selected)}
  <button id="submit"${disabled}>${submitting ? "Saving..." : "Submit judgment"}</button>
  <details class="instructions"><summary>Instructions</summary>
    <p>${escapeHtml(task.instructions)}</p>
  </details>`;
}

export function renderState(state: SessionState): string {
  switch (state.phase) {
    case "idle":
    case "loading":
      return `<p class="status">Loading next item...</p>`;
    case "task":
      return renderTask(state.task, state.selected, state.submitting);
    case "done":
      return `
  <div class="done">
    <h2>All done</h2>
    <p>You judged ${state.judged} of ${state.total} items. Thank you!</p>
  </div>`;
    case "error":
      return `
  <div class="banner error">
    <p>Connection trouble: ${escapeHtml(state.message)}</p>
    <button id="retry">Retry</button>
  </div>`;
  }
}
