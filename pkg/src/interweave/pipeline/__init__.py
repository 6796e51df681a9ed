from .conversation import run_conversation
from .refine import RefinementPolicy, StageContext, refine
from .runner import (
    GenerationConfig,
    GenerationRunner,
    GenerationSummary,
    RunInterrupted,
)
from .stages import (
    FLAG_CAPTION_OVER_LIMIT,
    FLAG_CAPTION_SHORTENED,
    FLAG_QUESTION_OVER_LIMIT,
    RefinementPipeline,
)

__all__ = [
    "FLAG_CAPTION_OVER_LIMIT",
    "FLAG_CAPTION_SHORTENED",
    "FLAG_QUESTION_OVER_LIMIT",
    "GenerationConfig",
    "GenerationRunner",
    "GenerationSummary",
    "RefinementPipeline",
    "RefinementPolicy",
    "RunInterrupted",
    "StageContext",
    "refine",
    "run_conversation",
]
