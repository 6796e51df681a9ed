/** Framework-free state machines the views (and the e2e tests) drive.
 *
 * All durable state lives server-side; the controllers only hold the task
 * currently on screen and the operator's unsubmitted selections. A draft
 * starts empty on every task -- the UI never fabricates or pre-selects a
 * score -- and a submit is blocked until all four dimensions are explicit.
 */

import { ApiError, type AnnotationClient } from "./api.js";
import {
  DIMENSIONS,
  disagreementDimensions,
  isCompleteDraft,
  isValidScore,
  type Dimension,
  type ScoreDraft,
  type ScoreVector,
  type TaskView,
} from "./types.js";

export type Toast = { kind: "info" | "error"; message: string };

export interface FlowHooks {
  onChange?: () => void;
  onToast?: (toast: Toast) => void;
}

export type FlowPhase = "idle" | "loading" | "scoring" | "drained" | "failed";

export class TaskFlowController {
  phase: FlowPhase = "idle";
  task: TaskView | null = null;
  draft: ScoreDraft = {};
  lastError: string | null = null;
  focusedDimension: Dimension = "tcc";
  private submitting = false;

  constructor(
    readonly api: AnnotationClient,
    private readonly hooks: FlowHooks = {},
  ) {}

  private changed(): void {
    this.hooks.onChange?.();
  }

  private toast(kind: Toast["kind"], message: string): void {
    this.hooks.onToast?.({ kind, message });
  }

  async loadNext(): Promise<void> {
    this.phase = "loading";
    this.changed();
    try {
      const task = await this.api.nextTask();
      this.task = task;
      this.draft = {};
      this.focusedDimension = "tcc";
      this.lastError = null;
      this.phase = task === null ? "drained" : "scoring";
    } catch (error) {
      this.phase = "failed";
      this.lastError = errorText(error);
    }
    this.changed();
  }

  setScore(dimension: Dimension, value: number): void {
    if (!isValidScore(value)) {
      this.toast("error", `score must be an integer 0-5, got ${value}`);
      return;
    }
    this.draft = { ...this.draft, [dimension]: value };
    this.changed();
  }

  clearScore(dimension: Dimension): void {
    const { [dimension]: _, ...rest } = this.draft;
    this.draft = rest;
    this.changed();
  }

  focusDimension(dimension: Dimension): void {
    this.focusedDimension = dimension;
    this.changed();
  }

  focusStep(delta: 1 | -1): void {
    const index = DIMENSIONS.indexOf(this.focusedDimension);
    const next = DIMENSIONS[(index + delta + DIMENSIONS.length) % DIMENSIONS.length]!;
    this.focusDimension(next);
  }

  get canSubmit(): boolean {
    return this.phase === "scoring" && !this.submitting && isCompleteDraft(this.draft);
  }

  /** Submit the four selections, then advance to the next task.
   *
   * Incomplete drafts never reach the network. A concurrent second call is
   * a no-op (double-submit guard). An already-resolved task is reported as
   * a non-blocking toast and skipped; other service rejections are surfaced
   * verbatim and keep the task on screen.
   */
  async submit(): Promise<ScoreVector | null> {
    if (this.task === null || this.submitting) return null;
    if (!isCompleteDraft(this.draft)) {
      const missing = DIMENSIONS.filter((d) => this.draft[d] === undefined);
      this.toast("error", `select a score for: ${missing.join(", ")}`);
      return null;
    }
    const scores = this.draft;
    this.submitting = true;
    this.changed();
    try {
      const state = await this.api.submitScore(this.task.task_id, scores);
      this.toast("info", `submitted (${state})`);
      await this.loadNext();
      return scores;
    } catch (error) {
      if (error instanceof ApiError && error.isAlreadyResolved) {
        this.toast("info", `task already resolved elsewhere; skipping`);
        await this.loadNext();
        return null;
      }
      this.lastError = errorText(error);
      this.toast("error", this.lastError);
      return null;
    } finally {
      this.submitting = false;
      this.changed();
    }
  }
}

export class DiscussionController {
  tasks: TaskView[] = [];
  current: TaskView | null = null;
  lastError: string | null = null;

  constructor(
    readonly api: AnnotationClient,
    private readonly hooks: FlowHooks = {},
  ) {}

  private changed(): void {
    this.hooks.onChange?.();
  }

  async refreshQueue(): Promise<void> {
    this.tasks = await this.api.listTasks("in_discussion");
    this.changed();
  }

  /** Open one disputed task; tasks that are not in discussion are refused
   * client-side with the same wording the service uses. */
  async open(taskId: string): Promise<TaskView> {
    const task = await this.api.getTask(taskId);
    if (task.state !== "in_discussion") {
      this.lastError = `task ${taskId} is not in discussion (state: ${task.state})`;
      this.changed();
      throw new ApiError(409, this.lastError);
    }
    this.current = task;
    this.lastError = null;
    this.changed();
    return task;
  }

  disagreements(task: TaskView | null = this.current): Dimension[] {
    if (!task?.scores) return [];
    return disagreementDimensions(task.scores);
  }

  async resolve(scores: ScoreVector, resolvers?: string[]): Promise<void> {
    if (this.current === null) throw new Error("no discussion task open");
    const everyone = resolvers ?? this.current.assigned_to;
    try {
      await this.api.resolve(this.current.task_id, scores, everyone);
      this.hooks.onToast?.({ kind: "info", message: `resolved ${this.current.task_id}` });
      this.current = null;
      await this.refreshQueue();
    } catch (error) {
      this.lastError = errorText(error);
      this.hooks.onToast?.({ kind: "error", message: this.lastError });
      throw error;
    }
  }
}

function errorText(error: unknown): string {
  if (error instanceof ApiError) return error.detail;
  return error instanceof Error ? error.message : String(error);
}
