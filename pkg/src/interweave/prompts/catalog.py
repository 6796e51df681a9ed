"""Prompt templates: loading, slot substitution, history serialization.

Templates ship as text resources and can be overridden per deployment by
pointing a catalog at a directory holding files with the same names
(``qr_generate.txt`` etc.), e.g. for revised or non-English prompts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from ..errors import MissingSlotError, UnknownSlotError
from ..model import Turn


class PromptStage(str, Enum):
    QR = "qr"
    AR = "ar"
    IR = "ir"
    JUDGE = "judge"


class Phase(str, Enum):
    GENERATE = "generate"
    SUGGEST = "suggest"
    REFINE = "refine"
    SCORE = "score"


@dataclass(frozen=True)
class PromptKind:
    stage: PromptStage
    phase: Phase

    def __post_init__(self):
        if (self.stage is PromptStage.JUDGE) != (self.phase is Phase.SCORE):
            raise ValueError("the judge stage pairs only with the score phase")

    @property
    def template_name(self) -> str:
        return f"{self.stage.value}_{self.phase.value}.txt"


QR_GENERATE = PromptKind(PromptStage.QR, Phase.GENERATE)
QR_SUGGEST = PromptKind(PromptStage.QR, Phase.SUGGEST)
QR_REFINE = PromptKind(PromptStage.QR, Phase.REFINE)
AR_GENERATE = PromptKind(PromptStage.AR, Phase.GENERATE)
AR_SUGGEST = PromptKind(PromptStage.AR, Phase.SUGGEST)
AR_REFINE = PromptKind(PromptStage.AR, Phase.REFINE)
IR_SUGGEST = PromptKind(PromptStage.IR, Phase.SUGGEST)
IR_REFINE = PromptKind(PromptStage.IR, Phase.REFINE)
JUDGE_SCORE = PromptKind(PromptStage.JUDGE, Phase.SCORE)

ALL_KINDS = (
    QR_GENERATE,
    QR_SUGGEST,
    QR_REFINE,
    AR_GENERATE,
    AR_SUGGEST,
    AR_REFINE,
    IR_SUGGEST,
    IR_REFINE,
    JUDGE_SCORE,
)

# Structured shape critics are asked to use for suggestions; filled into the
# {json_format} slot of the suggest prompts.
JSON_FORMATS = {
    PromptStage.QR: '{"suggestions": "<your modification suggestions>"}',
    PromptStage.AR: (
        '{"answer_suggestions": "<suggestions for the answer>", '
        '"caption_suggestions": "<suggestions for the image description>"}'
    ),
    PromptStage.IR: '{"suggestions": "<your modification suggestions>"}',
}

_SLOT_RE = re.compile(r"\{([a-z_]+)\}")


def serialize_history(turns: Sequence[Turn]) -> str:
    """Render prior turns as numbered blocks for threading into stage prompts.

    Only text enters language-model prompts; images are represented by their
    final captions.
    """
    blocks = []
    for turn in turns:
        blocks.append(
            f"Turn {turn.index}:\n"
            f"Q: {turn.question}\n"
            f"A: {turn.answer}\n"
            f"Image caption: {turn.final_caption}"
        )
    return "Conversation history:\n" + "\n\n".join(blocks)


class PromptCatalog:
    """Loads templates and renders prompts by pure slot substitution."""

    def __init__(self, override_dir: str | Path | None = None):
        self.override_dir = Path(override_dir) if override_dir else None

    def template_text(self, kind: PromptKind) -> str:
        if self.override_dir is not None:
            candidate = self.override_dir / kind.template_name
            if candidate.exists():
                return candidate.read_text(encoding="utf-8")
        return _packaged_template(kind.template_name)

    def required_slots(self, kind: PromptKind) -> frozenset[str]:
        return frozenset(_SLOT_RE.findall(self.template_text(kind)))

    def render(
        self,
        kind: PromptKind,
        slots: Mapping[str, str],
        history: Sequence[Turn] | None = None,
    ) -> str:
        """Substitute slots verbatim; unknown or missing slots are rejected.

        Substitution is single-pass, so slot values containing braces (the
        structured suggestion shapes, JSON payloads) are inserted untouched.
        When `history` is non-empty its serialization is prepended.
        """
        template = self.template_text(kind)
        required = frozenset(_SLOT_RE.findall(template))
        for name in slots:
            if name not in required:
                raise UnknownSlotError(name, kind.template_name)
        for name in required:
            if name not in slots:
                raise MissingSlotError(name, kind.template_name)

        rendered = _SLOT_RE.sub(lambda m: str(slots[m.group(1)]), template)
        if history:
            rendered = serialize_history(history) + "\n\n" + rendered
        return rendered


@lru_cache(maxsize=None)
def _packaged_template(name: str) -> str:
    ref = resources.files(__package__).joinpath("templates").joinpath(name)
    return ref.read_text(encoding="utf-8")


_DEFAULT = PromptCatalog()


def render_prompt(
    kind: PromptKind,
    slots: Mapping[str, str],
    history: Sequence[Turn] | None = None,
    catalog: PromptCatalog | None = None,
) -> str:
    return (catalog or _DEFAULT).render(kind, slots, history)
