import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import { DiscussionController, TaskFlowController, type Toast } from "../src/controller.js";
import { FakeApi, taskFixture, vector } from "./helpers.js";

function flowWith(api: FakeApi) {
  const toasts: Toast[] = [];
  const flow = new TaskFlowController(api, { onToast: (t) => toasts.push(t) });
  return { flow, toasts };
}

describe("TaskFlowController", () => {
  it("loads the next task with an empty draft", async () => {
    const api = new FakeApi();
    api.queue = [taskFixture()];
    const { flow } = flowWith(api);
    await flow.loadNext();
    expect(flow.phase).toBe("scoring");
    expect(flow.task?.task_id).toBe("task-s000");
    expect(flow.draft).toEqual({});
    expect(flow.canSubmit).toBe(false);
  });

  it("reports a drained queue", async () => {
    const api = new FakeApi();
    const { flow } = flowWith(api);
    await flow.loadNext();
    expect(flow.phase).toBe("drained");
    expect(flow.task).toBeNull();
  });

  it("requires all four dimensions before submitting", async () => {
    const api = new FakeApi();
    api.queue = [taskFixture()];
    const { flow, toasts } = flowWith(api);
    await flow.loadNext();
    flow.setScore("tcc", 4);
    flow.setScore("icc", 5);
    flow.setScore("iq", 3);
    expect(flow.canSubmit).toBe(false);
    await flow.submit();
    expect(api.submitted).toHaveLength(0);
    expect(toasts.at(-1)?.message).toContain("its");

    flow.setScore("its", 4);
    expect(flow.canSubmit).toBe(true);
    await flow.submit();
    expect(api.submitted).toEqual([
      { taskId: "task-s000", scores: { tcc: 4, icc: 5, iq: 3, its: 4 } },
    ]);
  });

  it("submits exactly the operator's selections, never defaults", async () => {
    const api = new FakeApi();
    api.queue = [taskFixture()];
    const { flow } = flowWith(api);
    await flow.loadNext();
    for (const [dim, value] of [["tcc", 0], ["icc", 5], ["iq", 1], ["its", 2]] as const) {
      flow.setScore(dim, value);
    }
    const sent = await flow.submit();
    expect(sent).toEqual({ tcc: 0, icc: 5, iq: 1, its: 2 });
    expect(api.submitted[0]?.scores).toEqual(sent);
  });

  it("rejects out-of-range selections locally", async () => {
    const api = new FakeApi();
    api.queue = [taskFixture()];
    const { flow, toasts } = flowWith(api);
    await flow.loadNext();
    flow.setScore("tcc", 6);
    flow.setScore("icc", -1);
    flow.setScore("iq", 2.5);
    expect(flow.draft).toEqual({});
    expect(toasts).toHaveLength(3);
  });

  it("advances to the next task after a successful submit", async () => {
    const api = new FakeApi();
    api.queue = [taskFixture(), taskFixture({ task_id: "task-s001", sample_id: "s001" })];
    const { flow } = flowWith(api);
    await flow.loadNext();
    for (const dim of ["tcc", "icc", "iq", "its"] as const) flow.setScore(dim, 3);
    await flow.submit();
    expect(flow.task?.task_id).toBe("task-s001");
    expect(flow.draft).toEqual({});
  });

  it("guards against double submit", async () => {
    const api = new FakeApi();
    api.queue = [taskFixture()];
    const { flow } = flowWith(api);
    await flow.loadNext();
    for (const dim of ["tcc", "icc", "iq", "its"] as const) flow.setScore(dim, 2);
    const [first, second] = await Promise.all([flow.submit(), flow.submit()]);
    expect(api.submitted).toHaveLength(1);
    expect([first, second].filter((r) => r !== null)).toHaveLength(1);
  });

  it("skips an already-resolved task with a non-blocking toast", async () => {
    const api = new FakeApi();
    api.queue = [taskFixture(), taskFixture({ task_id: "task-s001", sample_id: "s001" })];
    api.submitResults = [new ApiError(409, "task task-s000 is already resolved")];
    const { flow, toasts } = flowWith(api);
    await flow.loadNext();
    for (const dim of ["tcc", "icc", "iq", "its"] as const) flow.setScore(dim, 1);
    await flow.submit();
    expect(toasts.some((t) => t.kind === "info" && t.message.includes("already resolved"))).toBe(
      true,
    );
    expect(flow.task?.task_id).toBe("task-s001");
  });

  it("surfaces other service rejections verbatim and stays on the task", async () => {
    const api = new FakeApi();
    api.queue = [taskFixture()];
    api.submitResults = [new ApiError(403, "task task-s000 is not assigned to mallory")];
    const { flow, toasts } = flowWith(api);
    await flow.loadNext();
    for (const dim of ["tcc", "icc", "iq", "its"] as const) flow.setScore(dim, 1);
    await flow.submit();
    expect(flow.task?.task_id).toBe("task-s000");
    expect(toasts.at(-1)).toEqual({
      kind: "error",
      message: "task task-s000 is not assigned to mallory",
    });
  });
});

describe("DiscussionController", () => {
  function discussionTask() {
    return taskFixture({
      task_id: "task-s007",
      sample_id: "s007",
      state: "in_discussion",
      scores: { alice: vector(4), bob: { tcc: 4, icc: 3, iq: 4, its: 4 } },
    });
  }

  it("highlights exactly the contested dimensions", async () => {
    const api = new FakeApi();
    const task = discussionTask();
    api.taskById.set(task.task_id, task);
    const controller = new DiscussionController(api);
    await controller.open(task.task_id);
    expect(controller.disagreements()).toEqual(["icc"]);
  });

  it("refuses tasks that are not in discussion", async () => {
    const api = new FakeApi();
    const task = taskFixture({ state: "pending" });
    api.taskById.set(task.task_id, task);
    const controller = new DiscussionController(api);
    await expect(controller.open(task.task_id)).rejects.toThrow("not in discussion");
  });

  it("resolves with the full assignee set by default", async () => {
    const api = new FakeApi();
    const task = discussionTask();
    api.taskById.set(task.task_id, task);
    api.discussionTasks = [task];
    const controller = new DiscussionController(api);
    await controller.open(task.task_id);
    await controller.resolve(vector(4));
    expect(api.resolved).toEqual([
      { taskId: "task-s007", scores: vector(4), resolvers: ["alice", "bob"] },
    ]);
    expect(controller.current).toBeNull();
    expect(controller.tasks).toHaveLength(0);
  });
});
