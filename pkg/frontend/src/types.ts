/** Shared types mirroring the annotation service's JSON payloads. */

export const DIMENSIONS = ["tcc", "icc", "iq", "its"] as const;
export type Dimension = (typeof DIMENSIONS)[number];

export const DIMENSION_LABELS: Record<Dimension, string> = {
  tcc: "Text Content Completeness",
  icc: "Image Content Completeness",
  iq: "Image Quality",
  its: "Image-Text Synergy",
};

export type ScoreVector = Record<Dimension, number>;

/** Scores being assembled in the form; starts empty, never pre-filled. */
export type ScoreDraft = Partial<ScoreVector>;

export type TaskState = "pending" | "scored" | "in_discussion" | "resolved";

export interface RubricDimension {
  label: string;
  intro: string;
  anchors: Record<string, string>;
}

export interface TaskView {
  task_id: string;
  state: TaskState;
  assigned_to: string[];
  question: string;
  answer_text: string | null;
  image_url: string | null;
  sample_id: string;
  generator_id: string;
  rubric: Record<Dimension, RubricDimension>;
  your_score_submitted: boolean;
  scores?: Record<string, ScoreVector>;
  final?: ScoreVector;
}

export function isCompleteDraft(draft: ScoreDraft): draft is ScoreVector {
  return DIMENSIONS.every((dim) => typeof draft[dim] === "number");
}

export function isValidScore(value: number): boolean {
  return Number.isInteger(value) && value >= 0 && value <= 5;
}

/** Dimensions on which the submitted vectors disagree. */
export function disagreementDimensions(scores: Record<string, ScoreVector>): Dimension[] {
  const vectors = Object.values(scores);
  if (vectors.length < 2) return [];
  const first = vectors[0]!;
  return DIMENSIONS.filter((dim) => vectors.some((v) => v[dim] !== first[dim]));
}
