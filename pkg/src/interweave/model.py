"""Core value types for dialogue generation and scoring.

Everything here is immutable after construction and JSON round-trippable,
so instances can be shared freely across worker threads and persisted to
the dataset store without translation layers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping

from .errors import CaptionTooLongError, OutOfRangeError

CAPTION_WORD_LIMIT = 65
QUESTION_WORD_LIMIT = 50

SCORE_DIMENSIONS = ("tcc", "icc", "iq", "its")

DIMENSION_LABELS = {
    "tcc": "Text Content Completeness",
    "icc": "Image Content Completeness",
    "iq": "Image Quality",
    "its": "Image-Text Synergy",
}


def word_count(text: str) -> int:
    """Count maximal whitespace-separated tokens (trim, split on Unicode
    whitespace runs, drop empties)."""
    return len(text.split())


class Stage(str, Enum):
    QR = "qr"
    AR = "ar"
    IR = "ir"


class Termination(str, Enum):
    EVALUATOR_ACCEPTED = "evaluator_accepted"
    BUDGET_EXHAUSTED = "budget_exhausted"


class JudgeKind(str, Enum):
    HUMAN = "human"
    MODEL = "model"


@dataclass(frozen=True)
class ScoreVector:
    """Four integer scores, each on the 0..5 scale."""

    tcc: int
    icc: int
    iq: int
    its: int

    def __post_init__(self):
        for dim in SCORE_DIMENSIONS:
            value = getattr(self, dim)
            if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= 5:
                raise OutOfRangeError(dim, value)

    def as_dict(self) -> dict[str, int]:
        return {dim: getattr(self, dim) for dim in SCORE_DIMENSIONS}

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.tcc, self.icc, self.iq, self.its)


def validate_score_vector(tcc: int, icc: int, iq: int, its: int) -> ScoreVector:
    """Build a ScoreVector, rejecting any dimension outside 0..5."""
    return ScoreVector(tcc, icc, iq, its)


@dataclass(frozen=True)
class ScoreRecord:
    sample_id: str
    judge_id: str
    judge_kind: JudgeKind
    scores: ScoreVector
    timestamp: str  # ISO-8601 UTC instant

    def as_dict(self) -> dict[str, Any]:
        return {
            "sample_id": self.sample_id,
            "judge_id": self.judge_id,
            "judge_kind": self.judge_kind.value,
            "scores": self.scores.as_dict(),
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ScoreRecord":
        scores = data["scores"]
        return cls(
            sample_id=data["sample_id"],
            judge_id=data["judge_id"],
            judge_kind=JudgeKind(data["judge_kind"]),
            scores=ScoreVector(**{d: scores[d] for d in SCORE_DIMENSIONS}),
            timestamp=data["timestamp"],
        )


@dataclass(frozen=True)
class TopicPath:
    """Location of one leaf topic in the domain > category > topic tree."""

    domain: str
    category: str
    topic: str

    def __post_init__(self):
        for part in (self.domain, self.category, self.topic):
            if not part or not part.strip():
                raise ValueError("topic path segments must be non-empty")

    def as_tuple(self) -> tuple[str, str, str]:
        return (self.domain, self.category, self.topic)

    def display(self) -> str:
        return f"{self.domain} / {self.category} / {self.topic}"


TOPIC_PLACEHOLDER = "***"


@dataclass(frozen=True)
class QuestionTemplate:
    """A query-style pattern; `***` marks where the topic content goes."""

    id: str
    pattern: str

    def __post_init__(self):
        if not self.pattern.strip():
            raise ValueError(f"template {self.id} has an empty pattern")
        if TOPIC_PLACEHOLDER not in self.pattern:
            raise ValueError(f"template {self.id} lacks a {TOPIC_PLACEHOLDER} placeholder")


@dataclass(frozen=True)
class RefinementStep:
    """One applied refinement: the content as seen by the evaluator, the
    suggestion it produced, and the refined result."""

    input_snapshot: str
    suggestion: str
    output_snapshot: str


@dataclass(frozen=True)
class RefinementTrace:
    """Record of one refinement loop.

    `steps` holds only iterations where a suggestion was applied, so
    `len(steps)` is the refinement count. EVALUATOR_ACCEPTED means the
    evaluation after the last recorded step returned the accept sentinel.
    """

    stage: Stage
    steps: tuple[RefinementStep, ...]
    termination: Termination
    reprompts: int = 0
    flags: tuple[str, ...] = ()

    @property
    def refinement_count(self) -> int:
        return len(self.steps)

    def as_dict(self) -> dict[str, Any]:
        return {
            "stage": self.stage.value,
            "steps": [
                {
                    "input": s.input_snapshot,
                    "suggestion": s.suggestion,
                    "output": s.output_snapshot,
                }
                for s in self.steps
            ],
            "termination": self.termination.value,
            "reprompts": self.reprompts,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RefinementTrace":
        return cls(
            stage=Stage(data["stage"]),
            steps=tuple(
                RefinementStep(s["input"], s["suggestion"], s["output"]) for s in data["steps"]
            ),
            termination=Termination(data["termination"]),
            reprompts=data.get("reprompts", 0),
            flags=tuple(data.get("flags", ())),
        )


@dataclass(frozen=True)
class Turn:
    """One completed dialogue turn with its per-stage refinement traces."""

    index: int
    question: str
    answer: str
    temp_caption: str
    final_caption: str
    image_ref: str | None
    traces: Mapping[str, RefinementTrace] = field(default_factory=dict)

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("turn index is 1-based")
        if not self.question.strip():
            raise ValueError("turn question is empty")
        if not self.answer.strip():
            raise ValueError("turn answer is empty")
        if self.final_caption:
            words = word_count(self.final_caption)
            if words > CAPTION_WORD_LIMIT:
                raise CaptionTooLongError(words, CAPTION_WORD_LIMIT)

    def trace(self, stage: Stage) -> RefinementTrace | None:
        return self.traces.get(stage.value)

    def as_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "question": self.question,
            "answer": self.answer,
            "temp_caption": self.temp_caption,
            "final_caption": self.final_caption,
            "image_ref": self.image_ref,
            "traces": {stage: trace.as_dict() for stage, trace in self.traces.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Turn":
        return cls(
            index=data["index"],
            question=data["question"],
            answer=data["answer"],
            temp_caption=data["temp_caption"],
            final_caption=data["final_caption"],
            image_ref=data.get("image_ref"),
            traces={
                stage: RefinementTrace.from_dict(trace)
                for stage, trace in data.get("traces", {}).items()
            },
        )


@dataclass(frozen=True)
class Conversation:
    """A multi-turn dialogue; history for turn t is exactly turns 1..t-1."""

    id: str
    topic: TopicPath
    template_id: str
    turns: tuple[Turn, ...]
    turn_budget: int
    failure: str | None = None

    def __post_init__(self):
        if self.turn_budget < 1:
            raise ValueError("turn budget must be at least 1")
        if len(self.turns) > self.turn_budget:
            raise ValueError("more turns than the turn budget allows")
        for pos, turn in enumerate(self.turns, start=1):
            if turn.index != pos:
                raise ValueError("turn indices must be contiguous starting at 1")

    def history(self, turn_index: int) -> tuple[Turn, ...]:
        return tuple(t for t in self.turns if t.index < turn_index)

    def as_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "topic": {
                "domain": self.topic.domain,
                "category": self.topic.category,
                "topic": self.topic.topic,
            },
            "template_id": self.template_id,
            "turns": [t.as_dict() for t in self.turns],
            "turn_budget": self.turn_budget,
            "failure": self.failure,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Conversation":
        topic = data["topic"]
        return cls(
            id=data["id"],
            topic=TopicPath(topic["domain"], topic["category"], topic["topic"]),
            template_id=data["template_id"],
            turns=tuple(Turn.from_dict(t) for t in data["turns"]),
            turn_budget=data["turn_budget"],
            failure=data.get("failure"),
        )

    def to_json(self) -> str:
        return dumps_canonical(self.as_dict())

    @classmethod
    def from_json(cls, text: str) -> "Conversation":
        return cls.from_dict(json.loads(text))


def dumps_canonical(data: Any) -> str:
    """Stable JSON encoding used everywhere byte-level determinism matters."""
    return json.dumps(data, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def iter_jsonl(text: str) -> Iterable[dict]:
    for line in text.splitlines():
        line = line.strip()
        if line:
            yield json.loads(line)
