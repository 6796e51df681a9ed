"""Strict parsers for model output formats.

Lenient in whitespace and casing, strict in structure: markers must exist
in order, score blocks must be unique, values must be integers in range.
Structural violations raise typed errors rather than returning partial
values, so malformed responses never leak into the dataset.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from ..errors import EmptyResponseError, FormatError
from ..model import CAPTION_WORD_LIMIT, ScoreVector, word_count


@dataclass(frozen=True)
class SuggestionOutcome:
    """Either the accept sentinel or a non-empty suggestion text."""

    accepted: bool
    text: str | None = None

    def __post_init__(self):
        if not self.accepted and not (self.text and self.text.strip()):
            raise ValueError("a suggestion needs non-empty text")

    @classmethod
    def accept(cls) -> "SuggestionOutcome":
        return cls(accepted=True)

    @classmethod
    def suggest(cls, text: str) -> "SuggestionOutcome":
        return cls(accepted=False, text=text)


ACCEPT = SuggestionOutcome.accept()


@dataclass(frozen=True)
class AnswerCaption:
    answer: str
    caption: str
    caption_over_limit: bool = False

    def as_block(self) -> str:
        """Canonical two-line form, reused when a pair goes back into prompts."""
        return f"answer: {self.answer}\ncaption: {self.caption}"


_ANSWER_MARK = re.compile(r"^\s*answer\s*:\s*", re.IGNORECASE)
_CAPTION_MARK = re.compile(r"^\s*caption\s*:\s*", re.IGNORECASE)


def parse_answer_caption(raw: str) -> AnswerCaption:
    """Split a response into its answer and caption payloads.

    The first line starting with ``answer:`` opens the answer; a later line
    starting with ``caption:`` opens the caption which runs to the end. A
    caption marker before the answer marker is an ordering violation.
    """
    if not raw or not raw.strip():
        raise EmptyResponseError()

    lines = raw.splitlines()
    answer_at = caption_at = None
    for i, line in enumerate(lines):
        if answer_at is None and _ANSWER_MARK.match(line):
            answer_at = i
        elif caption_at is None and _CAPTION_MARK.match(line):
            caption_at = i
            if answer_at is not None:
                break

    if answer_at is None:
        raise FormatError("missing 'answer:' marker", raw)
    if caption_at is None:
        raise FormatError("missing 'caption:' marker", raw)
    if caption_at < answer_at:
        raise FormatError("'caption:' appears before 'answer:'", raw)

    answer_lines = [_ANSWER_MARK.sub("", lines[answer_at], count=1)]
    answer_lines += lines[answer_at + 1 : caption_at]
    caption_lines = [_CAPTION_MARK.sub("", lines[caption_at], count=1)]
    caption_lines += lines[caption_at + 1 :]

    answer = "\n".join(answer_lines).strip()
    caption = "\n".join(caption_lines).strip()
    if not answer:
        raise FormatError("empty answer", raw)
    if not caption:
        raise FormatError("empty caption", raw)

    return AnswerCaption(
        answer=answer,
        caption=caption,
        caption_over_limit=word_count(caption) > CAPTION_WORD_LIMIT,
    )


_WRAPPING = "\"'`“”‘’"
_TRAILING_PUNCT = ".!;:,"
_FENCE_RE = re.compile(r"^```[a-zA-Z]*\s*|\s*```$")


def _normalized_sentinel(text: str) -> bool:
    cleaned = text.strip().strip(_WRAPPING).rstrip(_TRAILING_PUNCT).strip(_WRAPPING).strip()
    return cleaned.lower() == "none"


def _from_structured(raw: str) -> str | None:
    """Pull the textual payload out of a structured suggestion object, if any."""
    candidate = _FENCE_RE.sub("", raw.strip())
    try:
        obj = json.loads(candidate)
    except (json.JSONDecodeError, ValueError):
        return None
    if not isinstance(obj, dict):
        return None
    parts = []
    for key, value in obj.items():
        if value is None:
            continue
        text = str(value).strip()
        if not text or text.lower() == "none":
            continue
        parts.append(f"{key}: {text}" if len(obj) > 1 else text)
    return "\n".join(parts) if parts else ""


def parse_suggestion(raw: str) -> SuggestionOutcome:
    """Classify a critic response as the accept sentinel or a suggestion."""
    if raw is None or not raw.strip():
        raise EmptyResponseError()
    if _normalized_sentinel(raw):
        return ACCEPT
    structured = _from_structured(raw)
    if structured is not None:
        # An object whose payloads are all empty/None also counts as accept.
        return SuggestionOutcome.suggest(structured) if structured else ACCEPT
    return SuggestionOutcome.suggest(raw.strip())


_BLOCK_RE = re.compile(
    r"\[\s*text\s+content\s+completeness\s*:\s*(-?\d+)\s*;"
    r"\s*image\s+content\s+completeness\s*:\s*(-?\d+)\s*;"
    r"\s*image\s+quality\s*:\s*(-?\d+)\s*;"
    r"\s*image[\s-]*text\s+synergy\s*:\s*(-?\d+)\s*\]",
    re.IGNORECASE,
)


def parse_judge_scores(raw: str) -> ScoreVector:
    """Extract the bracketed four-dimension score block from a judge response.

    Surrounding prose is tolerated; exactly one block must be present and all
    four values must be integers in 0..5.
    """
    if not raw or not raw.strip():
        raise EmptyResponseError()
    matches = _BLOCK_RE.findall(raw)
    if not matches:
        raise FormatError("no score block found", raw)
    if len(matches) > 1:
        raise FormatError("ambiguous: multiple score blocks", raw)
    tcc, icc, iq, its = (int(v) for v in matches[0])
    return ScoreVector(tcc, icc, iq, its)


def format_judge_scores(scores: ScoreVector) -> str:
    """Canonical bracket block; parse_judge_scores(format_judge_scores(v)) == v."""
    return (
        f"[Text Content Completeness: {scores.tcc}; "
        f"Image Content Completeness: {scores.icc}; "
        f"Image Quality: {scores.iq}; "
        f"Image-Text Synergy: {scores.its}]"
    )
