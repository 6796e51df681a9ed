/** DOM rendering. Pure functions from state to elements; the controllers
 * own all behavior. Missing modalities render as explicit banners rather
 * than blank space so annotators can apply the rubric floors deliberately.
 */

import type { AnnotationClient } from "./api.js";
import type { DiscussionController, TaskFlowController, Toast } from "./controller.js";
import {
  DIMENSIONS,
  DIMENSION_LABELS,
  disagreementDimensions,
  isCompleteDraft,
  type Dimension,
  type ScoreDraft,
  type TaskView,
} from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderSamplePanel(task: TaskView, api: Pick<AnnotationClient, "imageUrl">): HTMLElement {
  const panel = el("section", "sample-panel");
  panel.append(el("h2", "sample-id", `${task.sample_id} (${task.generator_id})`));

  const question = el("div", "question");
  question.append(el("h3", undefined, "Question"), el("p", undefined, task.question));
  panel.append(question);

  const answer = el("div", "answer");
  answer.append(el("h3", undefined, "Answer text"));
  if (task.answer_text === null) {
    answer.append(el("p", "missing-banner", "No text in this response (null)"));
  } else {
    answer.append(el("p", undefined, task.answer_text));
  }
  panel.append(answer);

  const image = el("div", "image");
  image.append(el("h3", undefined, "Answer image"));
  if (task.image_url === null) {
    image.append(el("p", "missing-banner", "No image in this response (null)"));
  } else {
    const img = el("img", "sample-image");
    img.src = api.imageUrl(task.image_url);
    img.alt = `image for ${task.sample_id}`;
    image.append(img);
  }
  panel.append(image);
  return panel;
}

export function renderScoreForm(flow: TaskFlowController): HTMLElement {
  const task = flow.task;
  const form = el("section", "score-form");
  if (!task) return form;

  for (const dim of DIMENSIONS) {
    form.append(renderDimensionRow(dim, task, flow));
  }

  const submit = el("button", "submit-button", "Submit scores");
  submit.type = "button";
  submit.disabled = !flow.canSubmit;
  submit.addEventListener("click", () => void flow.submit());
  form.append(submit);

  if (!isCompleteDraft(flow.draft)) {
    const missing = DIMENSIONS.filter((d) => flow.draft[d] === undefined);
    form.append(el("p", "hint", `unset: ${missing.map((d) => d.toUpperCase()).join(", ")}`));
  }
  return form;
}

function renderDimensionRow(
  dim: Dimension,
  task: TaskView,
  flow: TaskFlowController,
): HTMLElement {
  const row = el("div", flow.focusedDimension === dim ? "dimension focused" : "dimension");
  row.dataset.dimension = dim;
  row.addEventListener("click", () => flow.focusDimension(dim));

  const header = el("div", "dimension-header");
  header.append(el("span", "dimension-label", DIMENSION_LABELS[dim]));
  row.append(header);

  const buttons = el("div", "score-buttons");
  for (let value = 0; value <= 5; value += 1) {
    const button = el(
      "button",
      flow.draft[dim] === value ? "score-button selected" : "score-button",
      String(value),
    );
    button.type = "button";
    button.dataset.dimension = dim;
    button.dataset.value = String(value);
    button.addEventListener("click", (event) => {
      event.stopPropagation();
      flow.focusDimension(dim);
      flow.setScore(dim, value);
    });
    buttons.append(button);
  }
  row.append(buttons);
  row.append(renderRubric(dim, task));
  return row;
}

function renderRubric(dim: Dimension, task: TaskView): HTMLElement {
  // Collapsible per dimension; annotators expand only what they need.
  const details = el("details", "rubric");
  const spec = task.rubric[dim];
  details.append(el("summary", undefined, `Rubric: ${spec.label}`));
  details.append(el("p", "rubric-intro", spec.intro));
  const list = el("ol", "rubric-anchors");
  list.start = 0;
  for (let score = 0; score <= 5; score += 1) {
    list.append(el("li", undefined, spec.anchors[String(score)] ?? ""));
  }
  details.append(list);
  return details;
}

export function renderDiscussionView(
  task: TaskView,
  discussion: DiscussionController,
  draft: ScoreDraft,
  onDraftChange: (dim: Dimension, value: number) => void,
): HTMLElement {
  const view = el("section", "discussion-view");
  view.append(el("h2", undefined, `Discussion: ${task.sample_id}`));
  const scores = task.scores ?? {};
  const contested = new Set(disagreementDimensions(scores));
  const annotators = Object.keys(scores).sort();

  const table = el("table", "score-diff");
  const head = el("tr");
  head.append(el("th", undefined, "Dimension"));
  for (const annotator of annotators) head.append(el("th", undefined, annotator));
  head.append(el("th", undefined, "Final"));
  table.append(head);

  for (const dim of DIMENSIONS) {
    const tr = el("tr", contested.has(dim) ? "mismatch" : undefined);
    tr.dataset.dimension = dim;
    tr.append(el("td", undefined, DIMENSION_LABELS[dim]));
    for (const annotator of annotators) {
      tr.append(el("td", undefined, String(scores[annotator]![dim])));
    }
    const cell = el("td");
    const input = el("input");
    input.type = "number";
    input.min = "0";
    input.max = "5";
    input.dataset.dimension = dim;
    if (draft[dim] !== undefined) input.value = String(draft[dim]);
    input.addEventListener("input", () => onDraftChange(dim, Number(input.value)));
    cell.append(input);
    tr.append(cell);
    table.append(tr);
  }
  view.append(table);

  const resolve = el("button", "resolve-button", "Resolve with final scores");
  resolve.type = "button";
  resolve.disabled = !isCompleteDraft(draft);
  resolve.addEventListener("click", () => {
    if (isCompleteDraft(draft)) void discussion.resolve(draft);
  });
  view.append(resolve);
  return view;
}

export function renderToast(toast: Toast): HTMLElement {
  return el("div", `toast toast-${toast.kind}`, toast.message);
}

export function renderStatus(flow: TaskFlowController): HTMLElement {
  switch (flow.phase) {
    case "drained":
      return el("p", "status", "Queue empty: nothing left to score.");
    case "loading":
      return el("p", "status", "Loading next task...");
    case "failed":
      return el("p", "status error", flow.lastError ?? "request failed");
    default:
      return el("span", "status-none");
  }
}
