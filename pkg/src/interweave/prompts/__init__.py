from .catalog import (
    ALL_KINDS,
    AR_GENERATE,
    AR_REFINE,
    AR_SUGGEST,
    IR_REFINE,
    IR_SUGGEST,
    JSON_FORMATS,
    JUDGE_SCORE,
    QR_GENERATE,
    QR_REFINE,
    QR_SUGGEST,
    Phase,
    PromptCatalog,
    PromptKind,
    PromptStage,
    render_prompt,
    serialize_history,
)
from .parsing import (
    ACCEPT,
    AnswerCaption,
    SuggestionOutcome,
    format_judge_scores,
    parse_answer_caption,
    parse_judge_scores,
    parse_suggestion,
)
from .rubric import DIMENSION_RUBRICS, QUESTION_QUALITY_CHECKLIST, rubric_text

__all__ = [
    "ACCEPT",
    "ALL_KINDS",
    "AR_GENERATE",
    "AR_REFINE",
    "AR_SUGGEST",
    "AnswerCaption",
    "DIMENSION_RUBRICS",
    "IR_REFINE",
    "IR_SUGGEST",
    "JSON_FORMATS",
    "JUDGE_SCORE",
    "Phase",
    "PromptCatalog",
    "PromptKind",
    "PromptStage",
    "QR_GENERATE",
    "QR_REFINE",
    "QR_SUGGEST",
    "QUESTION_QUALITY_CHECKLIST",
    "SuggestionOutcome",
    "format_judge_scores",
    "parse_answer_caption",
    "parse_judge_scores",
    "parse_suggestion",
    "render_prompt",
    "rubric_text",
    "serialize_history",
]
