/** Bootstrap: wire the session to the DOM. */

import { ApiClient } from "./api.js";
import { actionForKey } from "./keyboard.js";
import { AnnotationSession } from "./session.js";
import { renderState } from "./view.js";
import type { OptionId } from "./types.js";

function annotatorIdFromUrl(): string {
  const params = new URLSearchParams(window.location.search);
  const fromUrl = params.get("annotator");
  if (fromUrl) {
    window.localStorage.setItem("annotator_id", fromUrl);
    return fromUrl;
  }
  const stored = window.localStorage.getItem("annotator_id");
  if (stored) return stored;
  const entered = window.prompt("Enter your annotator id:") ?? "";
  window.localStorage.setItem("annotator_id", entered);
  return entered;
}

function mount(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const session = new AnnotationSession(new ApiClient(""), annotatorIdFromUrl());

  session.onChange((state) => {
    root.innerHTML = renderState(state);
  });

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.id === "submit") void session.submit();
    if (target.id === "retry") {
      const state = session.getState();
      if (state.phase === "error") void state.retry();
    }
  });

  root.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement;
    if (target.name === "judgment") session.select(target.value as OptionId);
  });

  document.addEventListener("keydown", (event) => {
    if ((event.target as HTMLElement | null)?.tagName === "INPUT" && event.key === "Enter") {
      return; // the radio change handler already fired; let submit be explicit
    }
    const action = actionForKey(event.key);
    if (action.kind === "select") session.selectSlot(action.slot);
    if (action.kind === "submit") void session.submit();
  });

  void session.start();
}

mount();
