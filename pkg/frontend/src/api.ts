/** Thin typed client over the annotation service HTTP API.
 *
 * Configuration is exactly a base URL and a bearer token; everything else
 * lives server-side. Service errors surface with their original detail
 * text so the UI can show them verbatim.
 */

import type { ScoreVector, TaskState, TaskView } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }

  get isAlreadyResolved(): boolean {
    return this.status === 409 && this.detail.includes("already resolved");
  }

  get isNotInDiscussion(): boolean {
    return this.status === 409 && this.detail.includes("not in discussion");
  }
}

interface StateReply {
  task_id: string;
  state: TaskState;
}

/** What the controllers and views need from a client; AnnotationApi is the
 * real implementation, tests substitute fakes. */
export interface AnnotationClient {
  nextTask(): Promise<TaskView | null>;
  getTask(taskId: string): Promise<TaskView>;
  listTasks(state?: TaskState): Promise<TaskView[]>;
  submitScore(taskId: string, scores: ScoreVector): Promise<TaskState>;
  resolve(taskId: string, scores: ScoreVector, resolvers: string[]): Promise<TaskState>;
  exportRecords(): Promise<string>;
  health(): Promise<{ status: string; tasks: Record<string, number> }>;
  imageUrl(path: string): string;
}

export class AnnotationApi implements AnnotationClient {
  constructor(
    readonly baseUrl: string,
    readonly token: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, route: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${route}`, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
      },
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const text = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, extractDetail(text) ?? `HTTP ${response.status}`);
    }
    const contentType = response.headers.get("content-type") ?? "";
    return (contentType.includes("application/json") ? JSON.parse(text) : text) as T;
  }

  async nextTask(): Promise<TaskView | null> {
    const reply = await this.request<{ task: TaskView | null }>("GET", "/tasks/next");
    return reply.task;
  }

  async getTask(taskId: string): Promise<TaskView> {
    return this.request<TaskView>("GET", `/tasks/${taskId}`);
  }

  async listTasks(state?: TaskState): Promise<TaskView[]> {
    const query = state ? `?state=${encodeURIComponent(state)}` : "";
    const reply = await this.request<{ tasks: TaskView[] }>("GET", `/tasks${query}`);
    return reply.tasks;
  }

  async submitScore(taskId: string, scores: ScoreVector): Promise<TaskState> {
    const reply = await this.request<StateReply>("POST", `/tasks/${taskId}/score`, scores);
    return reply.state;
  }

  async resolve(taskId: string, scores: ScoreVector, resolvers: string[]): Promise<TaskState> {
    const reply = await this.request<StateReply>("POST", `/tasks/${taskId}/resolve`, {
      scores,
      resolvers,
    });
    return reply.state;
  }

  async exportRecords(): Promise<string> {
    return this.request<string>("GET", "/export");
  }

  async health(): Promise<{ status: string; tasks: Record<string, number> }> {
    return this.request("GET", "/healthz");
  }

  imageUrl(path: string): string {
    return `${this.baseUrl}${path}`;
  }
}

function extractDetail(text: string): string | null {
  try {
    const parsed = JSON.parse(text) as { detail?: unknown };
    if (typeof parsed.detail === "string") return parsed.detail;
    if (parsed.detail !== undefined) return JSON.stringify(parsed.detail);
  } catch {
    /* non-JSON error body */
  }
  return text || null;
}
