/** Keyboard shortcuts: digits 1-4 pick an option, Enter submits. */
export function actionForKey(key) {
    if (key >= "1" && key <= "4") {
        return { kind: "select", slot: Number(key) };
    }
    if (key === "Enter") {
        return { kind: "submit" };
    }
    return { kind: "none" };
}
