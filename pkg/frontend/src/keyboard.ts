/** Keyboard-first scoring: annotators work through thousands of samples,
 * so every action maps to a key.
 *
 *   0-5         set the focused dimension's score
 *   j / arrow-down, k / arrow-up   move dimension focus
 *   backspace   clear the focused dimension
 *   enter       submit when all four dimensions are set
 */

import type { Dimension } from "./types.js";

export type KeyAction =
  | { kind: "set-score"; value: number }
  | { kind: "focus-step"; delta: 1 | -1 }
  | { kind: "clear-score" }
  | { kind: "submit" }
  | { kind: "none" };

export function actionForKey(key: string): KeyAction {
  if (/^[0-5]$/.test(key)) {
    return { kind: "set-score", value: Number(key) };
  }
  switch (key) {
    case "ArrowDown":
    case "j":
      return { kind: "focus-step", delta: 1 };
    case "ArrowUp":
    case "k":
      return { kind: "focus-step", delta: -1 };
    case "Backspace":
      return { kind: "clear-score" };
    case "Enter":
      return { kind: "submit" };
    default:
      return { kind: "none" };
  }
}

export interface KeyboardTarget {
  focusedDimension: Dimension;
  setScore(dimension: Dimension, value: number): void;
  clearScore(dimension: Dimension): void;
  focusStep(delta: 1 | -1): void;
  submit(): Promise<unknown>;
  canSubmit: boolean;
}

/** Apply one key press to a controller; returns true when it consumed the key. */
export function applyKey(target: KeyboardTarget, key: string): boolean {
  const action = actionForKey(key);
  switch (action.kind) {
    case "set-score":
      target.setScore(target.focusedDimension, action.value);
      return true;
    case "focus-step":
      target.focusStep(action.delta);
      return true;
    case "clear-score":
      target.clearScore(target.focusedDimension);
      return true;
    case "submit":
      if (target.canSubmit) void target.submit();
      return true;
    case "none":
      return false;
  }
}

export function bindKeyboard(target: KeyboardTarget, root: Document): () => void {
  const listener = (event: KeyboardEvent) => {
    const element = event.target as HTMLElement | null;
    if (element && ["INPUT", "TEXTAREA", "SELECT"].includes(element.tagName)) return;
    if (applyKey(target, event.key)) event.preventDefault();
  };
  root.addEventListener("keydown", listener);
  return () => root.removeEventListener("keydown", listener);
}
