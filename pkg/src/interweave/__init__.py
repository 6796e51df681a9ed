"""interweave: build and evaluate interleaved image-text dialogue datasets.

The pipeline side generates multi-turn dialogues where every turn runs
three cascaded generate-evaluate-refine loops (question, answer+caption,
image), against pluggable model backends. The evaluation side scores
generator outputs on four 0-5 dimensions via model judges, compares judges
against human annotation with RMSE / tolerance-agreement / gap
distributions, and ships a small HTTP service for the human annotation
workflow itself.
"""

from .model import (
    CAPTION_WORD_LIMIT,
    QUESTION_WORD_LIMIT,
    SCORE_DIMENSIONS,
    Conversation,
    JudgeKind,
    QuestionTemplate,
    RefinementStep,
    RefinementTrace,
    ScoreRecord,
    ScoreVector,
    Stage,
    Termination,
    TopicPath,
    Turn,
    validate_score_vector,
    word_count,
)

__version__ = "0.1.0"

__all__ = [
    "CAPTION_WORD_LIMIT",
    "Conversation",
    "JudgeKind",
    "QUESTION_WORD_LIMIT",
    "QuestionTemplate",
    "RefinementStep",
    "RefinementTrace",
    "SCORE_DIMENSIONS",
    "ScoreRecord",
    "ScoreVector",
    "Stage",
    "Termination",
    "TopicPath",
    "Turn",
    "validate_score_vector",
    "word_count",
]
