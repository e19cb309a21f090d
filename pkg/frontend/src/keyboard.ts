/** Keyboard shortcuts: digits 1-4 pick an option, Enter submits. */

export type KeyAction =
  | { kind: "select"; slot: number }
  | { kind: "submit" }
  | { kind: "none" };

export function actionForKey(key: string): KeyAction {
  if (key >= "1" && key <= "4") {
    return { kind: "select", slot: Number(key) };
  }
  if (key === "Enter") {
    return { kind: "submit" };
  }
  return { kind: "none" };
}
