/** Shared types mirroring the judgment service's JSON payloads. */

export const OPTION_IDS = [
  "first_better",
  "second_better",
  "both_fine",
  "both_bad",
] as const;

export type OptionId = (typeof OPTION_IDS)[number];

export interface JudgmentOption {
  id: OptionId;
  label: string;
}

/**
 * A blinded task as the client is allowed to see it. Deliberately contains
 * no authorship information: only story_a / story_b in the service's
 * presentation order.
 */
export interface TaskView {
  taskId: string;
  index: number;
  total: number;
  imageUris: string[];
  storyA: string;
  storyB: string;
  options: JudgmentOption[];
  instructions: string;
}

export interface DoneView {
  done: true;
  judged: number;
  total: number;
}

export interface ProgressView {
  judged: number;
  total: number;
}

export interface InstructionsView {
  instructions: string;
  options: { id: OptionId; label: string; example: string }[];
}

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;
