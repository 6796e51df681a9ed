import { ApiError, type AnnotationClient } from "../src/api.js";
import type { ScoreVector, TaskState, TaskView } from "../src/types.js";

export function rubricFixture(): TaskView["rubric"] {
  const make = (label: string) => ({
    label,
    intro: `${label}: what this dimension judges.`,
    anchors: Object.fromEntries(
      Array.from({ length: 6 }, (_, score) => [String(score), `${label} anchor ${score}`]),
    ),
  });
  return {
    tcc: make("Text Content Completeness"),
    icc: make("Image Content Completeness"),
    iq: make("Image Quality"),
    its: make("Image-Text Synergy"),
  };
}

export function taskFixture(overrides: Partial<TaskView> = {}): TaskView {
  return {
    task_id: "task-s000",
    state: "pending",
    assigned_to: ["alice", "bob"],
    question: "What do red pandas eat? Draw one, please.",
    answer_text: "Mostly bamboo, plus fruit and insects.",
    image_url: "/images/sha256:abc",
    sample_id: "s000",
    generator_id: "gen-x",
    rubric: rubricFixture(),
    your_score_submitted: false,
    ...overrides,
  };
}

/** In-memory stand-in for the service with scriptable failures. */
export class FakeApi implements AnnotationClient {
  queue: (TaskView | null)[] = [];
  submitResults: (TaskState | ApiError)[] = [];
  submitted: { taskId: string; scores: ScoreVector }[] = [];
  resolved: { taskId: string; scores: ScoreVector; resolvers: string[] }[] = [];
  discussionTasks: TaskView[] = [];
  taskById = new Map<string, TaskView>();

  async nextTask(): Promise<TaskView | null> {
    return this.queue.length > 0 ? this.queue.shift()! : null;
  }

  async getTask(taskId: string): Promise<TaskView> {
    const task = this.taskById.get(taskId);
    if (!task) throw new ApiError(404, "task not found");
    return task;
  }

  async listTasks(state?: TaskState): Promise<TaskView[]> {
    return state ? this.discussionTasks.filter((t) => t.state === state) : this.discussionTasks;
  }

  async submitScore(taskId: string, scores: ScoreVector): Promise<TaskState> {
    const result = this.submitResults.shift() ?? "scored";
    if (result instanceof ApiError) throw result;
    this.submitted.push({ taskId, scores });
    return result;
  }

  async resolve(taskId: string, scores: ScoreVector, resolvers: string[]): Promise<TaskState> {
    this.resolved.push({ taskId, scores, resolvers });
    const task = this.taskById.get(taskId);
    if (task) task.state = "resolved";
    this.discussionTasks = this.discussionTasks.filter((t) => t.task_id !== taskId);
    return "resolved";
  }

  async exportRecords(): Promise<string> {
    return "";
  }

  async health(): Promise<{ status: string; tasks: Record<string, number> }> {
    return { status: "ok", tasks: {} };
  }

  imageUrl(path: string): string {
    return `http://fake${path}`;
  }
}

export function vector(value: number): ScoreVector {
  return { tcc: value, icc: value, iq: value, its: value };
}
