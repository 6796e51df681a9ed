/** Application bootstrap: mounts the scoring flow and the discussion queue.
 *
 * Configuration is limited to the service base URL and the annotator's
 * bearer token, taken from query parameters (?service=...&token=...) and
 * remembered in localStorage.
 */

import { AnnotationApi } from "./api.js";
import { DiscussionController, TaskFlowController, type Toast } from "./controller.js";
import { bindKeyboard } from "./keyboard.js";
import {
  renderDiscussionView,
  renderSamplePanel,
  renderScoreForm,
  renderStatus,
  renderToast,
} from "./views.js";
import type { Dimension, ScoreDraft } from "./types.js";

function config(): { baseUrl: string; token: string } {
  const params = new URLSearchParams(window.location.search);
  const baseUrl =
    params.get("service") ?? localStorage.getItem("annotation.service") ?? window.location.origin;
  const token = params.get("token") ?? localStorage.getItem("annotation.token") ?? "";
  localStorage.setItem("annotation.service", baseUrl);
  if (token) localStorage.setItem("annotation.token", token);
  return { baseUrl, token };
}

export function mount(root: HTMLElement): void {
  const { baseUrl, token } = config();
  const api = new AnnotationApi(baseUrl, token);

  const toasts = document.createElement("div");
  toasts.className = "toasts";
  const showToast = (toast: Toast) => {
    const node = renderToast(toast);
    toasts.append(node);
    setTimeout(() => node.remove(), 4000);
  };

  let discussionDraft: ScoreDraft = {};
  const flow = new TaskFlowController(api, { onChange: redraw, onToast: showToast });
  const discussion = new DiscussionController(api, { onChange: redraw, onToast: showToast });

  function redraw(): void {
    root.replaceChildren();
    root.append(toasts);

    const header = document.createElement("header");
    header.innerHTML = `<h1>Annotation console</h1>`;
    root.append(header);

    root.append(renderStatus(flow));
    if (flow.task) {
      root.append(renderSamplePanel(flow.task, api));
      root.append(renderScoreForm(flow));
    }

    if (discussion.current?.scores) {
      root.append(
        renderDiscussionView(discussion.current, discussion, discussionDraft, onDraftChange),
      );
    } else if (discussion.tasks.length > 0) {
      const queue = document.createElement("section");
      queue.className = "discussion-queue";
      const title = document.createElement("h2");
      title.textContent = `Discussion queue (${discussion.tasks.length})`;
      queue.append(title);
      for (const task of discussion.tasks) {
        const button = document.createElement("button");
        button.type = "button";
        button.textContent = task.sample_id;
        button.addEventListener("click", () => {
          discussionDraft = {};
          void discussion.open(task.task_id);
        });
        queue.append(button);
      }
      root.append(queue);
    }
  }

  function onDraftChange(dim: Dimension, value: number): void {
    discussionDraft = { ...discussionDraft, [dim]: value };
    redraw();
  }

  bindKeyboard(flow, document);
  void flow.loadNext();
  void discussion.refreshQueue();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mount(document.getElementById("app")!);
}
